#include <doctest.h>

#include "qfps/qre.hpp"
#include "qfps/series.hpp"

using namespace qfps;

namespace {

std::vector<Rat> coeffs_of(const Expr& e, int upto) {
  TruncSeries s = series_of(e, upto);
  std::vector<Rat> out;
  for (int x = 0; x <= upto; ++x) out.push_back(x < s.off ? Rat(0) : s.coeff(x));
  return out;
}

}  // namespace

TEST_CASE("qre for tan") {
  QRE r = qde_to_qre(find_qde(parse("tan(z)")));
  // (n+1)(n+2) a_{n+2} - 2 sum_{k=0}^{n} (k+1) a_{k+1} a_{n-k} = 0
  REQUIRE(r.linear.size() == 1);
  CHECK(r.linear[0].shift == 2);
  MPoly n = MPoly::variable(1, 0);
  CHECK(r.linear[0].poly == (n + MPoly::constant(1, Rat(1))) * (n + MPoly::constant(1, Rat(2))));
  REQUIRE(r.convs.size() == 1);
  CHECK(r.convs[0].scale == MPoly::constant(1, Rat(-2)));
  CHECK(r.convs[0].i == 1);
  CHECK(r.convs[0].j == 0);
  CHECK(r.convs[0].p == 0);
  CHECK(to_string(r) ==
        "(n+1)*(n+2)*a[n+2] - 2*sum(k=0..n, (k+1)*a[k+1]*a[n-k]) = 0");
}

TEST_CASE("qre for the Bernoulli generating function") {
  QRE r = qde_to_qre(find_qde(parse("z/(exp(z)-1)")));
  // sum a_k a_{n-k} + (n-1) a_n + a_{n-1} = 0: like linear terms merge.
  REQUIRE(r.linear.size() == 2);
  CHECK(r.linear[0].shift == 0);
  CHECK(r.linear[0].poly == MPoly::variable(1, 0) - MPoly::constant(1, Rat(1)));
  CHECK(r.linear[1].shift == -1);
  CHECK(r.linear[1].poly == MPoly::constant(1, Rat(1)));
  REQUIRE(r.convs.size() == 1);
  CHECK(r.convs[0].scale == MPoly::constant(1, Rat(1)));
  CHECK(r.convs[0].i == 0);
  CHECK(r.convs[0].j == 0);
  CHECK(r.convs[0].p == 0);
  CHECK(to_string(r) == "(n-1)*a[n] + a[n-1] + sum(k=0..n, a[k]*a[n-k]) = 0");
}

TEST_CASE("qre for log(1+sin z)") {
  QRE r = qde_to_qre(find_qde(parse("log(1+sin(z))")));
  // sum (k+1)(k+2) a_{k+2} (n-k+1) a_{n-k+1} + (n+1)(n+2)(n+3) a_{n+3} = 0
  REQUIRE(r.linear.size() == 1);
  CHECK(r.linear[0].shift == 3);
  MPoly n = MPoly::variable(1, 0);
  auto c = [](long v) { return MPoly::constant(1, Rat(v)); };
  CHECK(r.linear[0].poly == (n + c(1)) * (n + c(2)) * (n + c(3)));
  REQUIRE(r.convs.size() == 1);
  CHECK(r.convs[0].scale == c(1));
  CHECK(r.convs[0].i == 2);
  CHECK(r.convs[0].j == 1);
  CHECK(r.convs[0].p == 0);
  CHECK(to_string(r) ==
        "(n+1)*(n+2)*(n+3)*a[n+3] + sum(k=0..n, "
        "(k+1)*(k+2)*a[k+2]*(n-k+1)*a[n-k+1]) = 0");
}

TEST_CASE("oracle coefficients satisfy the recurrences") {
  for (const char* s : {"tan(z)", "z/(exp(z)-1)", "log(1+sin(z))", "sec(z)",
                        "1/(1+sin(z))", "z/log(1+z)"}) {
    Expr f = parse(s);
    QRE r = qde_to_qre(find_qde(f));
    std::vector<Rat> a = coeffs_of(f, 20);
    for (int n = 0; n <= 15; ++n) CHECK(qre_holds_at(r, a, n));
  }
}

TEST_CASE("evaluate_qre local equations") {
  QRE bern = qde_to_qre(find_qde(parse("z/(exp(z)-1)")));
  // n = 0 with nothing known: a_0^2 - a_0 = 0.
  LocalEq e0 = evaluate_qre(bern, {}, 0);
  CHECK(e0.unknown == 0);
  CHECK(e0.quad == Rat(1));
  CHECK(e0.lin == Rat(-1));
  CHECK(e0.cst == Rat(0));
  // n = 3 with a_0..a_2 known: linear in a_3, solution 0 (B_3 = 0).
  LocalEq e3 = evaluate_qre(bern, {Rat(1), Rat(-1, 2), Rat(1, 12)}, 3);
  CHECK(e3.unknown == 3);
  CHECK(e3.quad == Rat(0));
  CHECK(!is_zero(e3.lin));
  CHECK(-e3.cst / e3.lin == Rat(0));

  // tan at n = 0 with a_0 = 0: the conv contribution vanishes through the
  // known zero even though a_1 is not supplied.
  QRE tanr = qde_to_qre(find_qde(parse("tan(z)")));
  LocalEq t0 = evaluate_qre(tanr, {Rat(0)}, 0);
  CHECK(t0.unknown == 2);
  CHECK(t0.quad == Rat(0));
  CHECK(t0.lin == Rat(2));
  CHECK(t0.cst == Rat(0));

  CHECK_THROWS_AS(evaluate_qre(tanr, {Rat(1)}, 0), InsufficientPrefix);
}

TEST_CASE("rewrite correctness against direct coefficient extraction") {
  // For f = exp(z): y'' y - y' y = 0 is a valid synthetic QDE
  // (exp'' exp - exp' exp = 0); its QRE must hold on the coefficients.
  QDE q = parse_qde("y''*y - y'*y = 0");
  CHECK(verify_qde(parse("exp(z)"), q));
  QRE r = qde_to_qre(q);
  std::vector<Rat> a = coeffs_of(parse("exp(z)"), 14);
  for (int n = 0; n <= 10; ++n) CHECK(qre_holds_at(r, a, n));

  // With explicit z powers: z^2 y'' - z^2 y = 0 for cosh.
  QDE q2 = parse_qde("z^2*y'' - z^2*y = 0");
  CHECK(verify_qde(parse("cosh(z)"), q2));
  QRE r2 = qde_to_qre(q2);
  std::vector<Rat> b = coeffs_of(parse("cosh(z)"), 14);
  for (int n = 0; n <= 10; ++n) CHECK(qre_holds_at(r2, b, n));
}

TEST_CASE("qre text round trip") {
  for (const char* s : {"tan(z)", "z/(exp(z)-1)", "log(1+sin(z))", "sec(z)",
                        "1/(1+sin(z))", "z/log(1+z)", "log(tan(z/2)+sec(z/2))"}) {
    QRE r = qde_to_qre(find_qde(parse(s)));
    CHECK(parse_qre(to_string(r)) == r);
  }
  FindOptions fo;
  fo.params = {"k"};
  QRE rk = qde_to_qre(find_qde(parse("sec(z)^k", {"k"}), fo));
  CHECK(parse_qre(to_string(rk), {"k"}) == rk);
}

TEST_CASE("empty sums contribute nothing") {
  // z^3 y^2 gives a convolution with p = 3: for n < 3 it is empty.
  QDE q = parse_qde("z^3*y^2 + y' = 0");
  QRE r = qde_to_qre(q);
  REQUIRE(r.convs.size() == 1);
  CHECK(r.convs[0].p == 3);
  // At n = 2 only the linear part contributes.
  LocalEq e = evaluate_qre(r, {Rat(5), Rat(7)}, 2);
  CHECK(e.unknown == 3);
  CHECK(e.quad == Rat(0));
  CHECK(e.lin == Rat(3));
  CHECK(e.cst == Rat(0));
}
