#include <doctest.h>

#include "qfps/render.hpp"
#include "qfps/rep.hpp"

using namespace qfps;

namespace {

std::vector<Rat> oracle_coeffs(const Expr& e, int shift, int count) {
  TruncSeries s = series_of(e, shift + count - 1);
  std::vector<Rat> out;
  for (int i = 0; i < count; ++i) {
    int x = i + shift;
    out.push_back(x < s.off ? Rat(0) : s.coeff(x));
  }
  return out;
}

MPoly npoly(std::initializer_list<long> roots, long lead = 1) {
  MPoly p = MPoly::constant(1, Rat(lead));
  for (long r : roots)
    p = p * (MPoly::variable(1, 0) + MPoly::constant(1, Rat(r)));
  return p;
}

}  // namespace

TEST_CASE("solve_recurrence: Bernoulli generating function") {
  Expr f = parse("z/(exp(z)-1)");
  QRE r = qde_to_qre(find_qde(f));
  auto [rec, ivals] = solve_recurrence(r, oracle_coeffs(f, 0, 8), 0);
  CHECK(rec.lhs_offset == 0);
  CHECK(rec.denom == npoly({1}));  // n + 1
  CHECK(rec.valid_from == 1);
  REQUIRE(ivals.size() == 1);
  CHECK(ivals[0] == Rat(1));
  // One surviving linear read a_{n-1}, one remainder convolution.
  REQUIRE(rec.lin.size() == 1);
  CHECK(rec.lin[0].shift == -1);
  CHECK(rec.lin[0].poly == MPoly::constant(1, Rat(1)));
  REQUIRE(rec.convs.size() == 1);
}

TEST_CASE("solve_recurrence: tan matches the printed representation") {
  Expr f = parse("tan(z)");
  QRE r = qde_to_qre(find_qde(f));
  auto [rec, ivals] = solve_recurrence(r, oracle_coeffs(f, 0, 8), 1);
  CHECK(rec.lhs_offset == 2);
  CHECK(rec.denom == npoly({1, 2}));  // (n+1)(n+2)
  CHECK(rec.valid_from == 1);
  REQUIRE(ivals.size() == 3);
  CHECK(ivals[0] == Rat(0));
  CHECK(ivals[1] == Rat(1));
  CHECK(ivals[2] == Rat(0));
  // Peeled boundary with a_1 = 1 frozen: -2 a_n.
  REQUIRE(rec.lin.size() == 1);
  CHECK(rec.lin[0].shift == 0);
  CHECK(rec.lin[0].poly == MPoly::constant(1, Rat(-2)));
}

TEST_CASE("solve_recurrence: 1/(1+sin z) matches the printed representation") {
  Expr f = parse("1/(1+sin(z))");
  QRE r = qde_to_qre(find_qde(f));
  auto [rec, ivals] = solve_recurrence(r, oracle_coeffs(f, 0, 8), 0);
  CHECK(rec.lhs_offset == 2);
  CHECK(rec.denom == npoly({1, 2}));
  CHECK(rec.valid_from == 0);
  REQUIRE(ivals.size() == 2);
  CHECK(ivals[0] == Rat(1));
  CHECK(ivals[1] == Rat(-1));
  // Boundary substitution folds to -5 a_n.
  REQUIRE(rec.lin.size() == 1);
  CHECK(rec.lin[0].shift == 0);
  CHECK(rec.lin[0].poly == MPoly::constant(1, Rat(-5)));
  REQUIRE(rec.convs.size() == 1);
  CHECK(rec.convs[0].scale.constant_value() == Rat(-3));
}

TEST_CASE("fps: Bernoulli generating function unrolls exactly") {
  SeriesRep rep = fps(parse("z/(exp(z)-1)"));
  CHECK(rep.shift == 0);
  CHECK(!rep.proven_zero);
  std::vector<Rat> a = unroll(rep, 31);
  std::vector<Rat> want = oracle_coeffs(rep.input, 0, 31);
  CHECK(a == want);
  CHECK(a[1] == Rat(-1, 2));
  CHECK(a[2] == Rat(1, 12));
  CHECK(a[3] == Rat(0));
}

TEST_CASE("fps: 1/log(1+z) gets the Laurent shift") {
  SeriesRep rep = fps(parse("1/log(1+z)"));
  CHECK(rep.shift == -1);
  std::vector<Rat> a = unroll(rep, 12);
  CHECK(a[0] == Rat(1));
  CHECK(a[1] == Rat(1, 2));
  CHECK(a[2] == Rat(-1, 12));
  std::vector<Rat> want = oracle_coeffs(parse("z/log(1+z)"), 0, 12);
  CHECK(a == want);
}

TEST_CASE("fps: log(tan(z/2)+sec(z/2)) needs four initial values") {
  SeriesRep rep = fps(parse("log(tan(z/2)+sec(z/2))"));
  CHECK(rep.shift == 0);
  REQUIRE(rep.ivals.size() == 4);
  CHECK(rep.ivals[0] == Rat(0));
  CHECK(rep.ivals[1] == Rat(1, 2));
  CHECK(rep.ivals[2] == Rat(0));
  CHECK(rep.ivals[3] == Rat(1, 48));
  CHECK(rep.rec.lhs_offset == 3);
  // Denominator 2(n+1)(n+2)(n+3), threshold 1.
  CHECK(rep.rec.denom == npoly({1, 2, 3}, 2));
  CHECK(rep.rec.valid_from == 1);
}

TEST_CASE("fps rejects parameterized input") {
  CHECK_THROWS_AS(fps(parse("sec(z)^k", {"k"})), RepError);
}

TEST_CASE("proven zero representations") {
  SeriesRep rep = fps(parse("sin(z)^2+cos(z)^2-1"));
  CHECK(rep.proven_zero);
  std::vector<Rat> a = unroll(rep, 10);
  for (auto& v : a) CHECK(is_zero(v));
}

TEST_CASE("qtaylor matches the published expansions") {
  TruncSeries sec7 = qtaylor(parse("sec(z)"), 7);
  CHECK(to_string(sec7) == "61/720*z^6 + 5/24*z^4 + 1/2*z^2 + 1");
  TruncSeries tan7 = qtaylor(parse("tan(z)"), 7);
  CHECK(to_string(tan7) == "17/315*z^7 + 2/15*z^5 + 1/3*z^3 + z");
  TruncSeries zero = qtaylor(parse("sin(z)^2+cos(z)^2-1"), 9);
  CHECK(to_string(zero) == "0");
}

TEST_CASE("qtaylor equals the oracle through order 30") {
  for (const char* s :
       {"tan(z)", "sec(z)", "z/(exp(z)-1)", "1/(1+sin(z))", "1/log(1+z)"}) {
    Expr f = parse(s);
    TruncSeries viaRep = qtaylor(f, 30);
    TruncSeries direct = series_of(f, 30);
    for (int x = std::min(viaRep.off, direct.off); x <= 30; ++x) {
      Rat a = x < viaRep.off ? Rat(0) : viaRep.coeff(x);
      Rat b = x < direct.off ? Rat(0) : direct.coeff(x);
      CHECK(a == b);
    }
  }
}

TEST_CASE("prove: not-equal with a witness") {
  Verdict v = prove(parse("tan(z)"), parse("sin(z)"));
  REQUIRE(v.kind == Verdict::Kind::NotEqual);
  CHECK(v.witness_exponent == 3);
  CHECK(v.lhs_coeff == Rat(1, 3));
  CHECK(v.rhs_coeff == Rat(-1, 6));
  // Oracle cross-check of the witness.
  TruncSeries d = series_of(parse("tan(z)-sin(z)"), 3);
  CHECK(d.valuation() == 3);
}

TEST_CASE("prove: half-angle logarithm identity") {
  Verdict v = prove(parse("log(tan(z/2)+sec(z/2))"),
                    parse("arcsinh(sin(z)/(1+cos(z)))"));
  CHECK(v.kind == Verdict::Kind::Equal);
  // Oracle cross-check on every equal verdict.
  CHECK(!valuation(parse("log(tan(z/2)+sec(z/2)) - arcsinh(sin(z)/(1+cos(z)))"), 30)
           .has_value());
}

TEST_CASE("prove: arctanh double-angle identity") {
  Verdict v = prove(parse("log((1+tan(z))/(1-tan(z)))"),
                    parse("2*arctanh(sin(2*z)/(1+cos(2*z)))"));
  CHECK(v.kind == Verdict::Kind::Equal);
}

TEST_CASE("prove: equal functions with different trees") {
  Verdict v = prove(parse("sec(z)^2"), parse("1+tan(z)^2"));
  CHECK(v.kind == Verdict::Kind::Equal);
}

TEST_CASE("normal form comparison requires everything to match") {
  SeriesRep a = fps(parse("tan(z)"));
  SeriesRep b = fps(parse("tan(z)"));
  CHECK(a.same_normal_form(b));
  SeriesRep c = fps(parse("sec(z)"));
  CHECK(!a.same_normal_form(c));
  // sin and cos share the recurrence but differ in initial values.
  SeriesRep s = fps(parse("sin(z)"));
  SeriesRep co = fps(parse("cos(z)"));
  CHECK(!s.same_normal_form(co));
  CHECK(s.qre == co.qre);
}

TEST_CASE("rep text rendering is stable") {
  SeriesRep rep = fps(parse("z/(exp(z)-1)"));
  CHECK(to_string(rep) ==
        "z/(exp(z) - 1) = sum(n>=0, a[n]*z^n)\n"
        "  a[n+1] = -(a[n] + sum(k=1..n, a[k]*a[n-k+1])) / (n + 2)   for n >= 0\n"
        "  a[0] = 1");
}
