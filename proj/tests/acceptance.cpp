// Acceptance suite: runs every criterion end to end and prints one
// pass/fail line per criterion. Exits nonzero when anything fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "qfps/qde.hpp"
#include "qfps/qre.hpp"
#include "qfps/render.hpp"
#include "qfps/rep.hpp"
#include "qfps/series.hpp"

using namespace qfps;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

// Proportionality of coefficient vectors over the fraction field.
bool proportional(const QDE& a, const QDE& b) {
  if (a.terms.size() != b.terms.size()) return false;
  const MPoly* ra = nullptr;
  const MPoly* rb = nullptr;
  for (size_t t = 0; t < a.terms.size(); ++t) {
    if (!(a.terms[t].second == b.terms[t].second)) return false;
    if (!ra) {
      ra = &a.terms[t].first;
      rb = &b.terms[t].first;
      continue;
    }
    if (!(a.terms[t].first * *rb == b.terms[t].first * *ra)) return false;
  }
  return true;
}

std::vector<Rat> oracle_coeffs(const Expr& e, int shift, int count) {
  TruncSeries s = series_of(e, shift + count - 1);
  std::vector<Rat> out;
  for (int i = 0; i < count; ++i) {
    int x = i + shift;
    out.push_back(x < s.off ? Rat(0) : s.coeff(x));
  }
  return out;
}

// Summation with the host-CAS convention the printed representations
// assume: sum(a..b) = 0 for b = a-1 and minus the reversed sum for b < a-1.
Rat casum(int a, int b, const std::function<Rat(int)>& f) {
  if (b >= a) {
    Rat s(0);
    for (int k = a; k <= b; ++k) s += f(k);
    return s;
  }
  if (b == a - 1) return Rat(0);
  Rat s(0);
  for (int k = b + 1; k <= a - 1; ++k) s += f(k);
  return -s;
}

using PaperRep = std::function<std::vector<Rat>(int)>;

// ---- criterion 1 -----------------------------------------------------------

struct Golden {
  const char* input;
  const char* qde;
  std::vector<std::string> params;
};

void criterion1() {
  const Golden goldens[] = {
      {"1/log(1+z)", "(1+z)*y' + y^2 = 0", {}},
      {"tan(z)", "y'' - 2*y'*y = 0", {}},
      {"sec(z)", "-y^2 - 2*y'^2 + y''*y = 0", {}},
      {"z/log(1+z)", "(-1-z)*y + y^2 + z*(1+z)*y' = 0", {}},
      {"sec(z)^k", "-k^2*y^2 + (-k-1)*y'^2 + k*y''*y = 0", {"k"}},
      {"(z/(exp(z)-1))^k*exp(x*z)",
       "(z*k*x - z*x^2 + k^2 - 2*k*x)*y^2 + (-z*k + 2*x*z + 2*k)*y'*y "
       "- z*(1+k)*y'^2 + z*k*y''*y = 0",
       {"k", "x"}},
      {"log(tan(z/2)+sec(z/2))", "-y'^2 - 8*y''^2 + 4*y'''*y' = 0", {}},
      {"2*arctanh(sin(2*z)/(1+cos(2*z)))", "-4*y'^2 - 2*y''^2 + y'''*y' = 0", {}},
      // stretch target, order 4
      {"tan(z)^k",
       "(20*k^2-24)*y'^2 + 4*k^2*y''*y + 3*(k-2)*(k+2)*y''^2 "
       "+ (-4*k^2+6)*y'''*y' + k^2*y''''*y = 0",
       {"k"}},
  };
  for (const auto& g : goldens) {
    std::set<std::string> ps(g.params.begin(), g.params.end());
    Expr f = parse(g.input, ps);
    FindOptions fo;
    fo.params = g.params;
    QDE got = find_qde(f, fo);
    QDE want = parse_qde(g.qde, g.params);
    require(proportional(got, want),
            std::string("QDE mismatch for ") + g.input + ": got " + to_string(got));
    require(verify_qde(f, got), std::string("verification failed for ") + g.input);
  }
}

// ---- criterion 2 -----------------------------------------------------------

void criterion2() {
  const std::pair<const char*, std::vector<std::string>> inputs[] = {
      {"1/log(1+z)", {}},
      {"tan(z)", {}},
      {"sec(z)", {}},
      {"z/log(1+z)", {}},
      {"sec(z)^k", {"k"}},
      {"(z/(exp(z)-1))^k*exp(x*z)", {"k", "x"}},
      {"log(tan(z/2)+sec(z/2))", {}},
      {"2*arctanh(sin(2*z)/(1+cos(2*z)))", {}},
      {"tan(z)^k", {"k"}},
  };
  for (const auto& [text, params] : inputs) {
    std::set<std::string> ps(params.begin(), params.end());
    Expr f = parse(text, ps);
    FindOptions fo;
    fo.params = params;
    QDE q = find_qde(f, fo);
    int found = q.leading_index();
    if (found > 3) {
      FindOptions below = fo;
      below.max_index = found - 1;
      bool failed = false;
      try {
        find_qde(f, below);
      } catch (const QdeSearchError&) {
        failed = true;
      }
      require(failed, std::string("a smaller leading index admits a solution for ") +
                          text);
    }
  }
}

// ---- criterion 3 -----------------------------------------------------------

void criterion3() {
  struct Case {
    const char* input;
    const char* qre;
  };
  const Case cases[] = {
      {"tan(z)", "(n+1)*(n+2)*a[n+2] - 2*sum(k=0..n, (k+1)*a[k+1]*a[n-k]) = 0"},
      {"z/(exp(z)-1)", "(n-1)*a[n] + a[n-1] + sum(k=0..n, a[k]*a[n-k]) = 0"},
      {"log(1+sin(z))",
       "(n+1)*(n+2)*(n+3)*a[n+3] + sum(k=0..n, "
       "(k+1)*(k+2)*a[k+2]*(n-k+1)*a[n-k+1]) = 0"},
  };
  for (const auto& c : cases) {
    QRE got = qde_to_qre(find_qde(parse(c.input)));
    QRE want = parse_qre(c.qre);
    require(got == want, std::string("QRE mismatch for ") + c.input + ": got " +
                             to_string(got));
  }
}

// ---- criterion 4 -----------------------------------------------------------

void check_rep_against_paper(const char* input, int want_shift,
                             const std::vector<Rat>& printed_ivals,
                             const PaperRep& paper, bool require_same_count) {
  Expr f = parse(input);
  SeriesRep rep = fps(f);
  require(rep.shift == want_shift, std::string(input) + ": shift mismatch");
  std::vector<Rat> ours = unroll(rep, 31);
  std::vector<Rat> theirs = paper(31);
  std::vector<Rat> oracle = oracle_coeffs(
      want_shift == 0 ? f : parse(std::string("z*(") + input + ")"), 0, 31);
  for (int i = 0; i <= 30; ++i) {
    require(ours[i] == theirs[i],
            std::string(input) + ": unrolled stream differs from the printed "
            "representation at index " + std::to_string(i));
    require(ours[i] == oracle[i],
            std::string(input) + ": unrolled stream differs from the oracle");
  }
  for (size_t i = 0; i < printed_ivals.size(); ++i)
    require(ours[i] == printed_ivals[i],
            std::string(input) + ": printed initial value mismatch at " +
                std::to_string(i));
  if (require_same_count)
    require(rep.ivals.size() == printed_ivals.size(),
            std::string(input) + ": initial value count differs from print");
}

void criterion4() {
  // Bernoulli generating function, printed with three initial values and
  // a_2 = 1/12.
  check_rep_against_paper(
      "z/(exp(z)-1)", 0, {Rat(1), Rat(-1, 2), Rat(1, 12)},
      [](int count) {
        std::vector<Rat> A{Rat(1), Rat(-1, 2), Rat(1, 12)};
        for (int n = 0; (int)A.size() < count; ++n) {
          Rat s = casum(1, n + 2, [&](int k) { return A[k] * A[n + 3 - k]; });
          A.push_back(-(s + A[n + 2]) / Rat(n + 4));
        }
        A.resize(count);
        return A;
      },
      false);

  // Reciprocal logarithm: Laurent shift -1.
  check_rep_against_paper(
      "1/log(1+z)", -1, {Rat(1), Rat(1, 2), Rat(-1, 12)},
      [](int count) {
        std::vector<Rat> A{Rat(1), Rat(1, 2), Rat(-1, 12)};
        for (int n = 0; (int)A.size() < count; ++n) {
          Rat s = casum(1, n + 2, [&](int k) { return A[k] * A[n + 3 - k]; });
          A.push_back(-(Rat(n + 1) * A[n + 2] + s) / Rat(n + 4));
        }
        A.resize(count);
        return A;
      },
      false);

  // tan
  check_rep_against_paper(
      "tan(z)", 0, {Rat(0), Rat(1), Rat(0)},
      [](int count) {
        std::vector<Rat> A{Rat(0), Rat(1), Rat(0)};
        for (int n = 0; (int)A.size() < count; ++n) {
          Rat s = casum(1, n, [&](int k) {
            return Rat(-2) * Rat(k + 1) * A[k + 1] * A[n - k + 1];
          });
          A.push_back(-(Rat(-2) * A[n + 1] + s) / Rat((n + 2) * (n + 3)));
        }
        A.resize(count);
        return A;
      },
      true);

  // 1/(1+sin z): two initial values; the sum reverses at n = 0.
  check_rep_against_paper(
      "1/(1+sin(z))", 0, {Rat(1), Rat(-1)},
      [](int count) {
        std::vector<Rat> A{Rat(1), Rat(-1)};
        for (int n = 0; (int)A.size() < count; ++n) {
          Rat s = casum(1, n - 1, [&](int k) { return Rat(-3) * A[k] * A[n - k]; });
          A.push_back(-(Rat(-5) * A[n] + s) / Rat((n + 1) * (n + 2)));
        }
        A.resize(count);
        return A;
      },
      true);

  // Half-angle logarithm: four initial values.
  check_rep_against_paper(
      "log(tan(z/2)+sec(z/2))", 0, {Rat(0), Rat(1, 2), Rat(0), Rat(1, 48)},
      [](int count) {
        std::vector<Rat> A{Rat(0), Rat(1, 2), Rat(0), Rat(1, 48)};
        for (int n = 0; (int)A.size() < count; ++n) {
          Rat s1 = casum(1, n, [&](int k) {
            return Rat(4) * Rat(k + 1) * Rat(k + 2) * Rat(k + 3) * A[k + 3] *
                   Rat(n - k + 2) * A[n - k + 2];
          });
          Rat s2 = casum(1, n, [&](int k) {
            return Rat(-1) * Rat(k + 1) * A[k + 1] * Rat(n - k + 2) * A[n - k + 2];
          });
          Rat s3 = casum(1, n, [&](int k) {
            return Rat(-8) * Rat(k + 1) * Rat(k + 2) * A[k + 2] * Rat(n - k + 2) *
                   Rat(n + 3 - k) * A[n + 3 - k];
          });
          Rat inner = Rat(-(n + 2)) * A[n + 2] / Rat(2) + s1 + s2 + s3;
          A.push_back(-inner / (Rat(2) * Rat(n + 2) * Rat(n + 3) * Rat(n + 4)));
        }
        A.resize(count);
        return A;
      },
      true);
}

// ---- criterion 5 -----------------------------------------------------------

void criterion5() {
  require(to_string(qtaylor(parse("sec(z)"), 7)) ==
              "61/720*z^6 + 5/24*z^4 + 1/2*z^2 + 1",
          "sec expansion differs");
  require(to_string(qtaylor(parse("tan(z)"), 7)) ==
              "17/315*z^7 + 2/15*z^5 + 1/3*z^3 + z",
          "tan expansion differs");
  const char* corpus[] = {
      "1/log(1+z)", "tan(z)", "sec(z)", "z/log(1+z)",
      "log(tan(z/2)+sec(z/2))", "2*arctanh(sin(2*z)/(1+cos(2*z)))",
      "z/(exp(z)-1)", "1/(1+sin(z))", "log(1+sin(z))",
  };
  for (const char* s : corpus) {
    Expr f = parse(s);
    TruncSeries viaRep = qtaylor(f, 30);
    TruncSeries direct = series_of(f, 30);
    for (int x = std::min(viaRep.off, direct.off); x <= 30; ++x) {
      Rat a = x < viaRep.off ? Rat(0) : viaRep.coeff(x);
      Rat b = x < direct.off ? Rat(0) : direct.coeff(x);
      require(a == b, std::string(s) + ": qtaylor disagrees with the oracle at z^" +
                          std::to_string(x));
    }
  }
}

// ---- criterion 6 -----------------------------------------------------------

void criterion6() {
  // Independent Bernoulli oracle: B_0 = 1 and, for n >= 2,
  // sum_{k=0}^{n-1} binom(n, k) B_k = 0.
  std::vector<Rat> B{Rat(1)};
  for (int n = 2; B.size() < 24; ++n) {
    Rat s(0);
    for (int k = 0; k <= n - 2; ++k) s += binomial(n, k) * B[k];
    B.push_back(-s / binomial(n, n - 1));
  }

  SeriesRep rep = fps(parse("z/(exp(z)-1)"));
  std::vector<Rat> a = unroll(rep, 24);
  Rat fact(1);
  for (int n = 0; n <= 20; ++n) {
    if (n > 0) fact *= Rat(n);
    require(a[n] * fact == B[n],
            "n! a_n != B_n at n = " + std::to_string(n));
    if (n >= 3 && n % 2 == 1)
      require(is_zero(B[n]), "odd Bernoulli number B_" + std::to_string(n) +
                                 " is not zero");
  }

  // Convolution identity: B_{2n+2} = -1/(2n+3) sum_{k=1}^{n}
  // binom(2n+2, 2k) B_{2k} B_{2(n+1-k)}, n = 1..8, from the representation.
  std::vector<Rat> Brep(24);
  Rat f2(1);
  for (int n = 0; n < 24; ++n) {
    if (n > 0) f2 *= Rat(n);
    Brep[n] = a[n] * f2;
  }
  for (int n = 1; n <= 8; ++n) {
    Rat s(0);
    for (int k = 1; k <= n; ++k)
      s += binomial(2 * n + 2, 2 * k) * Brep[2 * k] * Brep[2 * (n + 1 - k)];
    require(Brep[2 * n + 2] == -s / Rat(2 * n + 3),
            "convolution identity fails at n = " + std::to_string(n));
  }
}

// ---- criterion 7 -----------------------------------------------------------

void criterion7() {
  Verdict v1 = prove(parse("log(tan(z/2)+sec(z/2))"),
                     parse("arcsinh(sin(z)/(1+cos(z)))"));
  require(v1.kind == Verdict::Kind::Equal, "half-angle identity not proven");
  Verdict v2 = prove(parse("log((1+tan(z))/(1-tan(z)))"),
                     parse("2*arctanh(sin(2*z)/(1+cos(2*z)))"));
  require(v2.kind == Verdict::Kind::Equal, "double-angle identity not proven");

  struct Perturbed {
    const char* a;
    const char* b;
  };
  const Perturbed cases[] = {
      {"log(tan(z/2)+sec(z/3))", "arcsinh(sin(z)/(1+cos(z)))"},
      {"log(tan(z/2)+sec(z/2))", "arcsinh(sin(z)/(2+cos(z)))"},
      {"log((1+tan(z))/(1-tan(z)))", "2*arctanh(sin(3*z)/(1+cos(2*z)))"},
      {"log((1+tan(z))/(1-tan(z)))", "2*arctanh(sin(2*z)/(1+cos(2*z)))+z^5"},
      {"sec(z)", "cosh(z)"},
  };
  for (const auto& c : cases) {
    Expr a = parse(c.a), b = parse(c.b);
    Verdict v = prove(a, b);
    require(v.kind == Verdict::Kind::NotEqual,
            std::string("expected not-equal for ") + c.a + " vs " + c.b);
    // Witness cross-checked against the series oracle.
    auto val = valuation(a - b);
    require(val.has_value() && *val == v.witness_exponent,
            std::string("witness exponent wrong for ") + c.a);
    TruncSeries sa = series_of(a, *val), sb = series_of(b, *val);
    Rat ca = *val < sa.off ? Rat(0) : sa.coeff(*val);
    Rat cb = *val < sb.off ? Rat(0) : sb.coeff(*val);
    require(ca == v.lhs_coeff && cb == v.rhs_coeff,
            std::string("witness coefficients wrong for ") + c.a);
  }

  // The encoding-sensitive composition (Maple finds order 2, Maxima 3):
  // our engine must return some verified QDE of order <= 3.
  Expr g = parse("exp(2*arctanh(sin(2*z)/(1+cos(2*z))))");
  QDE q = find_qde(g);
  require(q.order() <= 3, "order above 3 for the exp-arctanh composition");
  require(verify_qde(g, q), "exp-arctanh QDE failed verification");
}

// ---- criterion 8 -----------------------------------------------------------

void criterion8() {
  // Bijectivity of the index map through 500 (row-major scheme order).
  {
    int i = 1, j = 1;
    for (int k = 1; k <= 500; ++k) {
      auto p = index_pair(k);
      require(p.first == i && p.second == j, "index map order breaks at k = " +
                                                 std::to_string(k));
      require(scheme_index(p.first, p.second) == k, "scheme index inverse");
      if (j == i) { ++i; j = 1; } else ++j;
    }
  }

  std::mt19937_64 rng(424242);
  const char* pool[] = {"tan(z)",  "sec(z)",  "exp(z)",      "log(1+z)",
                        "sin(z)",  "cos(z)",  "sinh(z)",     "z^2+z",
                        "1/(1+z)", "arctan(z)", "sqrt(1+z^2)", "cosh(z)"};
  std::uniform_int_distribution<int> pick(0, 11);

  // Non-linearity witness identity on 20 random pairs.
  for (int t = 0; t < 20; ++t) {
    Expr f = parse(pool[pick(rng)]);
    Expr g = parse(pool[pick(rng)]);
    Expr lhs = delta2(f + g, 5) - delta2(f, 5) - delta2(g, 5);
    Expr rhs = differentiate(f * g, 1);
    Tower tw;
    require(tw.canonicalize(lhs - rhs).is_zero(),
            "non-linearity identity fails");
  }

  // verify_qde holds on every search success.
  for (const char* s : {"tan(z)", "sec(z)", "1/log(1+z)", "z/log(1+z)",
                        "1/(1+sin(z))", "log(1+sin(z))", "exp(z)", "sin(z)",
                        "z/(exp(z)-1)", "log(tan(z/2)+sec(z/2))"}) {
    Expr f = parse(s);
    QDE q = find_qde(f);
    require(verify_qde(f, q), std::string("verify_qde fails for ") + s);
  }

  // Oracle/canonicalizer agreement on 100 random expressions of depth <= 4
  // through order 15.
  std::uniform_int_distribution<int> argp(0, 4), unary(0, 9), binop(0, 2);
  const char* args[] = {"z", "2*z", "z/2", "z^2", "z+z^2"};
  std::function<Expr(int)> gen = [&](int depth) -> Expr {
    Expr u = parse(args[argp(rng)]);
    if (depth <= 1) return u;
    Expr inner = gen(depth - 1);
    switch (unary(rng)) {
      case 0: return Expr::app(Func::Sin, u) * inner;
      case 1: return Expr::app(Func::Cos, u) + inner;
      case 2: return Expr::app(Func::Exp, u) * inner;
      case 3: return Expr::app(Func::Sinh, u) - inner;
      case 4: return Expr::app(Func::Tan, u) + inner;
      case 5: return Expr::app(Func::Log, Expr::integer(1) + u * u) + inner;
      case 6: return Expr::app(Func::Arctan, inner.is_zero() ? u : u);
      case 7: return Expr::app(Func::Sqrt, Expr::integer(1) + u * u) * inner;
      case 8: return inner * inner;
      default:
        return binop(rng) == 0 ? inner + u : inner * u;
    }
  };
  int checked = 0;
  while (checked < 100) {
    Expr e = gen(4);
    Tower tw;
    CanonicalForm cf = tw.canonicalize(e);
    TruncSeries a = cf_to_series(cf, 15);
    TruncSeries b = series_of(e, 15);
    for (int x = std::min(a.off, b.off); x <= 15; ++x) {
      Rat va = x < a.off ? Rat(0) : a.coeff(x);
      Rat vb = x < b.off ? Rat(0) : b.coeff(x);
      require(va == vb, "canonicalizer and oracle disagree for " + e.to_string());
    }
    ++checked;
  }
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<void()> run;
  };
  const Entry entries[] = {
      {"1: QDE golden set (proportional coefficients, verified)", criterion1},
      {"2: minimality below each found leading index", criterion2},
      {"3: QRE golden set, term for term", criterion3},
      {"4: normal forms match the printed representations", criterion4},
      {"5: truncated expansions via representations", criterion5},
      {"6: Bernoulli chain against the independent recurrence", criterion6},
      {"7: identity proving with verified witnesses", criterion7},
      {"8: property suites", criterion8},
  };
  int failures = 0;
  for (const auto& e : entries) {
    auto start = std::chrono::steady_clock::now();
    try {
      e.run();
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
      std::cout << "PASS  criterion " << e.name << "  [" << ms << " ms]\n";
    } catch (const std::exception& ex) {
      ++failures;
      std::cout << "FAIL  criterion " << e.name << ": " << ex.what() << "\n";
    }
  }
  if (failures) std::cout << failures << " criterion(s) failed\n";
  else std::cout << "all criteria passed\n";
  return failures == 0 ? 0 : 1;
}
