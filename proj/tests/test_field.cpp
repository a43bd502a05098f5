#include <doctest.h>

#include <random>

#include "qfps/linear.hpp"
#include "qfps/mpoly.hpp"
#include "qfps/ratfunc.hpp"

using namespace qfps;

namespace {

MPoly Z(int nv = 1) { return MPoly::variable(nv, 0); }
MPoly C(const Rat& c, int nv = 1) { return MPoly::constant(nv, c); }

std::mt19937_64 rng(20240811);

MPoly random_poly(int nvars, int max_deg, int terms) {
  std::uniform_int_distribution<int> deg(0, max_deg), coef(-6, 6);
  MPoly p(nvars);
  for (int t = 0; t < terms; ++t) {
    Monomial m{std::vector<int>(nvars, 0)};
    for (int v = 0; v < nvars; ++v) m.e[v] = deg(rng);
    p.add_term(m, Rat(coef(rng)));
  }
  return p;
}

RatFunc random_ratfunc(int nvars) {
  MPoly num = random_poly(nvars, 2, 3);
  MPoly den = random_poly(nvars, 2, 2);
  if (den.is_zero()) den = C(Rat(1), nvars);
  return RatFunc(num, den);
}

}  // namespace

TEST_CASE("mpoly arithmetic basics") {
  MPoly p = Z() + C(Rat(1));          // z + 1
  MPoly q = Z() * Z() - C(Rat(1));    // z^2 - 1
  CHECK(q.divide_exact(p) == Z() - C(Rat(1)));
  CHECK((p * p).degree_in(0) == 2);
  CHECK(p.pow(3).leading_coefficient() == 1);
  CHECK((p - p).is_zero());
  CHECK(p.derivative(0) == C(Rat(1)));
  CHECK(p.eval_var(0, Rat(2)).constant_value() == 3);
}

TEST_CASE("mpoly gcd and content") {
  MPoly p = (Z() + C(Rat(1))).pow(2) * (Z() - C(Rat(2)));
  MPoly q = (Z() + C(Rat(1))) * (Z() + C(Rat(3)));
  CHECK(gcd(p, q) == Z() + C(Rat(1)));

  // Multivariate: (z + k)(z - k) vs (z + k)^2 over vars (z, k).
  MPoly zk = MPoly::variable(2, 0) + MPoly::variable(2, 1);
  MPoly zmk = MPoly::variable(2, 0) - MPoly::variable(2, 1);
  CHECK(gcd(zk * zmk, zk * zk) == zk);

  MPoly r = C(Rat(4, 3)) * Z() + C(Rat(2, 3));
  CHECK(r.content() == Rat(2, 3));
  CHECK(r.primitive_part() == C(Rat(2)) * Z() + C(Rat(1)));
}

TEST_CASE("integer roots") {
  // (n-1)(n+4)n
  MPoly p = (Z() - C(Rat(1))) * (Z() + C(Rat(4))) * Z();
  auto roots = integer_roots(p, 0);
  CHECK(roots == std::vector<long>{-4, 0, 1});
  CHECK(integer_roots(Z() * Z() + C(Rat(1)), 0).empty());
}

TEST_CASE("pochhammer examples") {
  MPoly n = Z();
  // (n+1)_2 = (n+1)(n+2)
  CHECK(pochhammer(n + C(Rat(1)), 2) == (n + C(Rat(1))) * (n + C(Rat(2))));
  // (x)_0 = 1
  CHECK(pochhammer(n, 0) == C(Rat(1)));
  // (n+1)_3 = (n+1)(n+2)(n+3)
  CHECK(pochhammer(n + C(Rat(1)), 3) ==
        (n + C(Rat(1))) * (n + C(Rat(2))) * (n + C(Rat(3))));
}

TEST_CASE("pochhammer recursion property") {
  std::uniform_int_distribution<int> kd(0, 12), cd(-3, 3);
  for (int t = 0; t < 20; ++t) {
    int k = kd(rng);
    MPoly x = Z() + C(Rat(cd(rng)));
    CHECK(pochhammer(x, k) * (x + C(Rat(k))) == pochhammer(x, k + 1));
  }
}

TEST_CASE("ratfunc normalization and field axioms") {
  RatFunc a(Z() * Z() - C(Rat(1)), Z() + C(Rat(1)));
  CHECK(a.is_polynomial());  // cancels to z - 1
  CHECK(a.num() == Z() - C(Rat(1)));

  // Denominator made monic in z.
  RatFunc b(C(Rat(1)), C(Rat(2)) * Z() + C(Rat(2)));
  CHECK(b.den() == Z() + C(Rat(1)));
  CHECK(b.num() == C(Rat(1, 2)));

  for (int t = 0; t < 25; ++t) {
    RatFunc x = random_ratfunc(2), y = random_ratfunc(2), w = random_ratfunc(2);
    CHECK(((x + y) + w).equals(x + (y + w)));
    CHECK((x * (y + w)).equals(x * y + x * w));
    CHECK((x * y).equals(y * x));
    if (!x.is_zero()) {
      RatFunc inv = RatFunc::constant(2, Rat(1)) / x;
      CHECK((x * inv).equals(RatFunc::constant(2, Rat(1))));
    }
  }
}

TEST_CASE("solve_linear: 1/log(1+z) ansatz system") {
  // Rows: coefficient of L^1: C0 (1+z) = 0; L^0: C1 (1+z) - 1 = 0.
  int nv = 1;
  RatFunc zero(nv);
  RatFunc onez = RatFunc::from_poly(Z() + C(Rat(1)));
  std::vector<std::vector<RatFunc>> A = {
      {onez, zero},
      {zero, onez},
  };
  std::vector<RatFunc> b = {zero, RatFunc::constant(nv, Rat(1))};
  auto sol = solve_linear(A, b);
  REQUIRE(sol.has_value());
  CHECK((*sol)[0].is_zero());
  CHECK((*sol)[1].equals(RatFunc(C(Rat(1)), Z() + C(Rat(1)))));
}

TEST_CASE("solve_linear: tan ansatz system") {
  // From the tan(z) search at the order-2 step: unknowns C0..C4, rows of
  // the coefficients of tan^4..tan^0:
  //   C4 = 0; C3 + 2 = 0; 2 C4 + C2 + C1 = 0; C3 + C0 + 2 = 0; C4 + C2 = 0.
  int nv = 1;
  auto K = [&](long v) { return RatFunc::constant(nv, Rat(v)); };
  std::vector<std::vector<RatFunc>> A = {
      {K(0), K(0), K(0), K(0), K(1)},
      {K(0), K(0), K(0), K(1), K(0)},
      {K(0), K(1), K(1), K(0), K(2)},
      {K(1), K(0), K(0), K(1), K(0)},
      {K(0), K(0), K(1), K(0), K(1)},
  };
  std::vector<RatFunc> b = {K(0), K(-2), K(0), K(-2), K(0)};
  auto sol = solve_linear(A, b);
  REQUIRE(sol.has_value());
  CHECK((*sol)[0].is_zero());
  CHECK((*sol)[1].is_zero());
  CHECK((*sol)[2].is_zero());
  CHECK((*sol)[3].equals(K(-2)));
  CHECK((*sol)[4].is_zero());
}

TEST_CASE("solve_linear: empty and inconsistent systems") {
  auto sol = solve_linear({}, {});
  REQUIRE(sol.has_value());
  CHECK(sol->empty());

  int nv = 1;
  auto K = [&](long v) { return RatFunc::constant(nv, Rat(v)); };
  // x = 1 and x = 2 cannot both hold.
  auto bad = solve_linear({{K(1)}, {K(1)}}, {K(1), K(2)});
  CHECK(!bad.has_value());
}

TEST_CASE("solve_linear: random resubstitution") {
  std::uniform_int_distribution<int> dim(1, 4);
  for (int t = 0; t < 15; ++t) {
    int n = dim(rng), m = n + dim(rng) % 2;
    std::vector<std::vector<RatFunc>> A(m);
    std::vector<RatFunc> x_true;
    for (int j = 0; j < n; ++j) x_true.push_back(random_ratfunc(1));
    std::vector<RatFunc> b(m, RatFunc(1));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A[i].push_back(random_ratfunc(1));
      for (int j = 0; j < n; ++j) b[i] = b[i] + A[i][j] * x_true[j];
    }
    auto sol = solve_linear(A, b);
    REQUIRE(sol.has_value());
    for (int i = 0; i < m; ++i) {
      RatFunc acc(1);
      for (int j = 0; j < n; ++j) acc = acc + A[i][j] * (*sol)[j];
      CHECK(acc.equals(b[i]));
    }
  }
}
