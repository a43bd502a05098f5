#include "qfps/rep.hpp"

#include <algorithm>
#include <cassert>

namespace qfps {

namespace {

Rat poch_rat(long x, int k) {
  Rat r(1);
  for (int t = 0; t < k; ++t) r *= Rat(x + t);
  return r;
}

MPoly poch_poly(int nvars, int var, int base_const, int k) {
  MPoly x = MPoly::variable(nvars, var) + MPoly::constant(nvars, Rat(base_const));
  return pochhammer(x, k);
}

Rat ival_at(const std::vector<Rat>& v, int idx) {
  if (idx < 0) return Rat(0);
  assert(idx < (int)v.size());
  return v[idx];
}

// Remainder of one stored convolution at index n: the full sum minus
// both symbolic boundary summands. Reads only indices < n + M.
Rat conv_remainder(const ConvTerm& cv, const std::vector<Rat>& a, int n) {
  Rat scale = cv.scale.constant_value();
  auto at = [&](int idx) { return idx < 0 ? Rat(0) : a[idx]; };
  int span = n - cv.p;
  if (span >= 1) {
    Rat s(0);
    for (int k = 1; k <= span - 1; ++k)
      s += poch_rat(k + 1, cv.i) * poch_rat(span - k + 1, cv.j) * at(k + cv.i) *
           at(span - k + cv.j);
    return scale * s;
  }
  if (span == 0)
    return -scale * poch_rat(1, cv.i) * poch_rat(1, cv.j) * at(cv.i) * at(cv.j);
  // span < 0: both boundary summands, negated, with absent coefficients zero.
  Rat b0 = poch_rat(1, cv.i) * poch_rat(span + 1, cv.j) * at(cv.i) * at(span + cv.j);
  Rat b1 = poch_rat(span + 1, cv.i) * poch_rat(1, cv.j) * at(span + cv.i) * at(cv.j);
  return -scale * (b0 + b1);
}

}  // namespace

std::pair<SolvedRecurrence, std::vector<Rat>> solve_recurrence(
    const QRE& r, const CoeffProvider& oracle, int valuation_floor) {
  if (!r.params.empty())
    throw RepError("solve_recurrence: parameterized recurrences need "
                   "specialized parameters");
  if (r.linear.empty() && r.convs.empty())
    throw RepError("solve_recurrence: empty recurrence");

  int M = std::numeric_limits<int>::min();
  for (auto& lt : r.linear) M = std::max(M, lt.shift);
  int maxfix = -1;
  for (auto& cv : r.convs) {
    M = std::max(M, std::max(cv.i, cv.j) - cv.p);
    maxfix = std::max({maxfix, cv.i, cv.j});
  }

  // Fetch the small fixed-index values the boundary terms freeze.
  std::vector<Rat> ivals;
  auto ensure = [&](int upto) {
    while ((int)ivals.size() <= upto) ivals.push_back(oracle((int)ivals.size()));
  };
  if (maxfix >= 0) ensure(maxfix);

  SolvedRecurrence rec;
  rec.lhs_offset = M;
  MPoly D(1);
  for (auto& lt : r.linear) {
    if (lt.shift == M) D += lt.poly;
    else rec.lin.push_back(lt);
  }
  for (auto& cv : r.convs) {
    Rat scale = cv.scale.constant_value();
    // k = 0 boundary: scale (1)_i (n-p+1)_j a_i a_{n-p+j}
    {
      Rat c = scale * poch_rat(1, cv.i) * ival_at(ivals, cv.i);
      MPoly w = poch_poly(1, 0, 1 - cv.p, cv.j) * c;
      if (cv.j - cv.p == M) D += w;
      else if (!w.is_zero()) rec.lin.push_back({w, cv.j - cv.p});
    }
    // k = n-p boundary: scale (n-p+1)_i (1)_j a_{n-p+i} a_j
    {
      Rat c = scale * poch_rat(1, cv.j) * ival_at(ivals, cv.j);
      MPoly w = poch_poly(1, 0, 1 - cv.p, cv.i) * c;
      if (cv.i - cv.p == M) D += w;
      else if (!w.is_zero()) rec.lin.push_back({w, cv.i - cv.p});
    }
    rec.convs.push_back(cv);
  }
  // Merge linear terms sharing a shift.
  {
    std::map<int, MPoly> merged;
    for (auto& lt : rec.lin) {
      auto it = merged.find(lt.shift);
      if (it == merged.end()) merged.emplace(lt.shift, lt.poly);
      else it->second += lt.poly;
    }
    rec.lin.clear();
    for (auto it = merged.rbegin(); it != merged.rend(); ++it)
      if (!it->second.is_zero()) rec.lin.push_back({it->second, it->first});
  }
  rec.denom = D;

  int n0 = std::max(0, maxfix + 1 - M);
  n0 = std::max(n0, -M);
  n0 = std::max(n0, valuation_floor);
  if (!D.is_zero()) {
    for (long root : integer_roots(D, 0))
      n0 = std::max(n0, (int)root + 1);
    if (D.is_constant() && is_zero(D.constant_value()))
      throw RepError("solve_recurrence: zero denominator");
  }
  rec.valid_from = n0;

  int m = n0 + M;
  if (m > 0) ensure(m - 1);
  ivals.resize(std::max(m, 0));
  return {rec, ivals};
}

std::pair<SolvedRecurrence, std::vector<Rat>> solve_recurrence(
    const QRE& r, const std::vector<Rat>& prefix, int valuation_floor) {
  CoeffProvider p = [&prefix](int idx) -> Rat {
    if (idx >= (int)prefix.size())
      throw InsufficientPrefix("solve_recurrence: need coefficient a_" +
                               std::to_string(idx));
    return prefix[idx];
  };
  return solve_recurrence(r, p, valuation_floor);
}

// ---------------------------------------------------------------------------
// Unrolling.

namespace {

std::vector<Rat> unroll_implicit(const SeriesRep& rep, int count) {
  // Drive the unsolved QRE: each n pins down its highest coefficient.
  std::vector<Rat> a(rep.ivals.begin(), rep.ivals.end());
  int have = (int)a.size();
  for (int n = 0; (int)a.size() < count || n < count; ++n) {
    if ((int)a.size() >= count && n >= count) break;
    LocalEq eq;
    try {
      eq = evaluate_qre(rep.qre, a, n);
    } catch (const InsufficientPrefix&) {
      throw RepError("rep: implicit representation cannot reach coefficient " +
                     std::to_string(have));
    }
    if (eq.unknown < have) continue;  // consistency only
    if (eq.unknown > have)
      throw RepError("rep: implicit representation has a gap at a_" +
                     std::to_string(have));
    if (is_zero(eq.lin) || !is_zero(eq.quad))
      throw RepError("rep: implicit representation is degenerate at n = " +
                     std::to_string(n));
    a.push_back(-eq.cst / eq.lin);
    ++have;
  }
  a.resize(count);
  return a;
}

}  // namespace

std::vector<Rat> unroll(const SeriesRep& rep, int count) {
  if (count <= 0) return {};
  if (rep.proven_zero && rep.ivals.empty()) return std::vector<Rat>(count, Rat(0));
  if (rep.implicit) return unroll_implicit(rep, count);

  const SolvedRecurrence& rec = rep.rec;
  std::vector<Rat> a = rep.ivals;
  a.resize(std::max<size_t>(a.size(), 0));
  int m = rec.valid_from + rec.lhs_offset;
  assert((int)rep.ivals.size() == std::max(m, 0));
  for (int idx = m; idx < count; ++idx) {
    int n = idx - rec.lhs_offset;
    Rat total(0);
    for (auto& lt : rec.lin) {
      int at = n + lt.shift;
      if (at < 0) continue;
      total += lt.poly.eval_var(0, Rat(n)).constant_value() * a[at];
    }
    for (auto& cv : rec.convs) total += conv_remainder(cv, a, n);
    Rat d = rec.denom.eval_var(0, Rat(n)).constant_value();
    assert(!is_zero(d));
    a.push_back(-total / d);
  }
  a.resize(count);
  return a;
}

// ---------------------------------------------------------------------------
// Normal-form construction.

namespace {

struct SeriesOracle {
  Expr g;
  mutable TruncSeries cache;
  mutable bool filled = false;

  explicit SeriesOracle(Expr e) : g(std::move(e)) {}

  Rat at(int idx) const {
    int need = idx + 8;
    if (!filled || cache.valid <= idx) {
      cache = series_of(g, need);
      filled = true;
    }
    return idx < cache.off ? Rat(0) : cache.coeff(idx);
  }
};

bool is_trivial_zero_qde(const QDE& q) {
  return q.terms.size() == 1 && q.terms[0].second == DiffMono{0, -1} &&
         q.terms[0].first.is_constant();
}

void validate_rep(const SeriesRep& rep, int check_depth) {
  // 1. The initial segment satisfies the original recurrence wherever it
  //    covers every index it references.
  int m = (int)rep.ivals.size();
  int M = rep.rec.lhs_offset;
  for (int n = 0; n + std::max(M, 0) < m; ++n) {
    if (!qre_holds_at(rep.qre, rep.ivals, n))
      throw RepError("rep: initial values violate the recurrence at n = " +
                     std::to_string(n));
  }
  // 2. Unrolling reproduces the oracle exactly.
  int depth = m + std::max(M, 0) + check_depth;
  std::vector<Rat> got = unroll(rep, depth);
  TruncSeries want = series_of(rep.input, rep.shift + depth - 1);
  for (int idx = 0; idx < depth; ++idx) {
    int expo = idx + rep.shift;
    Rat w = expo < want.off ? Rat(0) : want.coeff(expo);
    if (got[idx] != w)
      throw RepError("rep: unrolled coefficient a_" + std::to_string(idx) +
                     " disagrees with the series oracle");
  }
}

}  // namespace

SeriesRep fps(const Expr& f, const FpsOptions& opt) {
  std::set<std::string> ps;
  f.collect_params(ps);
  if (!ps.empty())
    throw RepError("fps: parameterized input; specialize the parameters or "
                   "supply initial values externally");

  SeriesRep rep;
  rep.input = f;

  auto val = valuation(f);
  FindOptions fo;
  fo.max_index = opt.max_index;
  fo.depth_limit = opt.depth_limit;

  if (!val) {
    // Possibly identically zero: certify through a QDE when we can.
    rep.shift = 0;
    rep.qde = find_qde(f, fo);
    if (is_trivial_zero_qde(rep.qde)) {
      rep.proven_zero = true;
      rep.qre = qde_to_qre(rep.qde);
      return rep;
    }
    rep.qre = qde_to_qre(rep.qde);
    SeriesOracle oracle(f);
    auto [rec, ivals] =
        solve_recurrence(rep.qre, [&](int i) { return oracle.at(i); }, 0);
    rep.rec = rec;
    rep.ivals = ivals;
    bool zeros = std::all_of(ivals.begin(), ivals.end(),
                             [](const Rat& r) { return is_zero(r); });
    if (!zeros)
      throw RepError("fps: zero probe contradicted by initial values");
    if (!rep.rec.denom.is_zero()) {
      // Homogeneous recurrence + zero initial segment: induction gives 0.
      rep.proven_zero = true;
    } else {
      rep.implicit = true;
    }
    return rep;
  }

  rep.shift = std::min(*val, 0);
  Expr g = rep.shift == 0
               ? f
               : Expr::product({Expr::power(Expr::z(), -rep.shift), f});
  rep.qde = find_qde(g, fo);
  rep.qre = qde_to_qre(rep.qde);
  SeriesOracle oracle(g);
  int gval = *val - rep.shift;

  try {
    auto [rec, ivals] =
        solve_recurrence(rep.qre, [&](int i) { return oracle.at(i); }, gval);
    rep.rec = rec;
    rep.ivals = ivals;
  } catch (const RepError&) {
    rep.implicit = true;
  }
  if (!rep.implicit && rep.rec.denom.is_zero()) rep.implicit = true;

  if (rep.implicit) {
    // Fallback: keep the unsolved recurrence and enough initial values
    // that per-n evaluation determines everything we ever unroll.
    std::vector<Rat> a;
    int target = 48;
    int n = 0;
    while ((int)a.size() < target) {
      LocalEq eq;
      try {
        eq = evaluate_qre(rep.qre, a, n);
      } catch (const InsufficientPrefix&) {
        rep.oracle_resolved.push_back((int)a.size());
        a.push_back(oracle.at((int)a.size()));
        continue;
      }
      if (eq.unknown >= (int)a.size()) {
        if (eq.unknown > (int)a.size() || is_zero(eq.lin) || !is_zero(eq.quad)) {
          rep.oracle_resolved.push_back((int)a.size());
          a.push_back(oracle.at((int)a.size()));
          continue;
        }
        a.push_back(-eq.cst / eq.lin);
      }
      ++n;
      if (n > 4 * target)
        throw RepError("fps: implicit representation stalled");
    }
    int keep = rep.oracle_resolved.empty() ? 1 : rep.oracle_resolved.back() + 1;
    rep.ivals.assign(a.begin(), a.begin() + keep);
  } else {
    // Record the indices the oracle had to settle below the threshold.
    for (int n = 0; n < rep.rec.valid_from; ++n) {
      LocalEq eq;
      try {
        eq = evaluate_qre(rep.qre, rep.ivals, n);
      } catch (const InsufficientPrefix&) {
        continue;
      }
      if (eq.unknown >= 0 && (!is_zero(eq.quad) || is_zero(eq.lin)))
        rep.oracle_resolved.push_back(eq.unknown);
    }
  }

  validate_rep(rep, opt.check_depth);
  return rep;
}

TruncSeries qtaylor(const Expr& f, int order, const FpsOptions& opt) {
  SeriesRep rep = fps(f, opt);
  TruncSeries out;
  out.off = rep.proven_zero ? 0 : rep.shift;
  out.valid = order + 1;
  int count = out.valid - out.off;
  if (count <= 0) {
    out.off = out.valid;
    return out;
  }
  std::vector<Rat> a = unroll(rep, count);
  out.c = std::move(a);
  TruncSeries check = series_of(f, order);
  for (int x = out.off; x < out.valid; ++x) {
    Rat w = x < check.off ? Rat(0) : check.coeff(x);
    if (out.coeff(x) != w)
      throw RepError("qtaylor: representation disagrees with the series oracle");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normal-form comparison and zero-equivalence.

bool SeriesRep::same_normal_form(const SeriesRep& o) const {
  if (proven_zero || o.proven_zero) return proven_zero && o.proven_zero;
  if (implicit || o.implicit) return false;
  if (shift != o.shift) return false;
  if (!(qre == o.qre)) return false;
  if (rec.lhs_offset != o.rec.lhs_offset) return false;
  if (!(rec.denom == o.rec.denom)) return false;
  if (rec.valid_from != o.rec.valid_from) return false;
  if (!(rec.lin == o.rec.lin) || !(rec.convs == o.rec.convs)) return false;
  return ivals == o.ivals;
}

Verdict prove(const Expr& a, const Expr& b, const FpsOptions& opt) {
  Expr h = a - b;

  // Counterexample probe: the first differing coefficient settles it.
  auto hval = valuation(h);
  if (hval) {
    Verdict v;
    v.kind = Verdict::Kind::NotEqual;
    v.witness_exponent = *hval;
    TruncSeries sa = series_of(a, *hval), sb = series_of(b, *hval);
    v.lhs_coeff = *hval < sa.off ? Rat(0) : sa.coeff(*hval);
    v.rhs_coeff = *hval < sb.off ? Rat(0) : sb.coeff(*hval);
    v.reason = "coefficient of z^" + std::to_string(*hval) + " differs";
    return v;
  }

  // Quick difference route: catches degenerate differences cheaply.
  FpsOptions quick = opt;
  quick.max_index = std::min(opt.max_index, 8);
  try {
    SeriesRep rh = fps(h, quick);
    if (rh.proven_zero) {
      Verdict v;
      v.kind = Verdict::Kind::Equal;
      v.reason = "difference has the zero normal form";
      return v;
    }
  } catch (const std::exception&) {
    // fall through
  }

  // Same normal form on both sides.
  try {
    SeriesRep ra = fps(a, opt);
    SeriesRep rb = fps(b, opt);
    if (ra.same_normal_form(rb)) {
      Verdict v;
      v.kind = Verdict::Kind::Equal;
      v.reason = "identical normal forms";
      return v;
    }
  } catch (const std::exception&) {
    // fall through
  }

  // Full difference route.
  try {
    SeriesRep rh = fps(h, opt);
    if (rh.proven_zero) {
      Verdict v;
      v.kind = Verdict::Kind::Equal;
      v.reason = "difference has the zero normal form";
      return v;
    }
  } catch (const std::exception& e) {
    Verdict v;
    v.kind = Verdict::Kind::Undecided;
    v.reason = std::string("no certificate found: ") + e.what();
    return v;
  }
  Verdict v;
  v.kind = Verdict::Kind::Undecided;
  v.reason = "difference representation found but not proven zero";
  return v;
}

// ---------------------------------------------------------------------------
// Rendering (text; JSON and LaTeX live in render.cpp).

namespace {

std::string present_index(const std::string& head, int c) {
  if (c == 0) return head;
  return head + (c > 0 ? "+" : "-") + std::to_string(std::abs(c));
}

}  // namespace

std::string to_string(const SeriesRep& rep) {
  std::string out;
  std::string zpow = rep.shift == 0 ? "z^n" : "z^(n" +
      std::string(rep.shift > 0 ? "+" : "-") + std::to_string(std::abs(rep.shift)) + ")";
  out += rep.input.to_string() + " = sum(n>=0, a[n]*" + zpow + ")";
  if (rep.proven_zero) {
    out += "\n  proven zero";
    if (!rep.qde.terms.empty()) out += "  [" + qfps::to_string(rep.qde) + "]";
    return out;
  }
  if (rep.implicit) {
    out += "\n  implicit: " + qfps::to_string(rep.qre);
  } else {
    const SolvedRecurrence& rec = rep.rec;
    int n0 = rec.valid_from;
    int m = n0 + rec.lhs_offset;
    std::vector<std::string> names{"n"};
    // Presented at a[n+m] for n >= 0 (evaluation index n + n0).
    std::string rhs;
    bool first = true;
    auto add_piece = [&](bool neg, const std::string& body) {
      if (first) rhs += (neg ? "-" : "") + body;
      else rhs += (neg ? " - " : " + ") + body;
      first = false;
    };
    for (auto& lt : rec.lin) {
      MPoly poly = lt.poly.subst_var(
          0, MPoly::variable(1, 0) + MPoly::constant(1, Rat(n0)));
      bool neg = sgn(poly.leading_coefficient()) < 0;
      if (neg) poly = -poly;
      std::string coeff;
      if (!(poly.is_constant() && poly.constant_value() == 1)) {
        if (poly.is_constant()) coeff = to_string(poly.constant_value()) + "*";
        else coeff = "(" + poly.to_string(names) + ")*";
      }
      add_piece(neg, coeff + "a[" + present_index("n", n0 + lt.shift) + "]");
    }
    for (auto& cv : rec.convs) {
      Rat sc = cv.scale.constant_value();
      bool neg = sgn(sc) < 0;
      Rat asc = abs(sc);
      std::string pre = asc == 1 ? "" : to_string(asc) + "*";
      std::string inner;
      for (int t = 1; t <= cv.i; ++t) inner += "(" + present_index("k", t) + ")*";
      inner += "a[" + present_index("k", cv.i) + "]*";
      for (int t = 1; t <= cv.j; ++t)
        inner += "(" + present_index("n-k", n0 - cv.p + t) + ")*";
      inner += "a[" + present_index("n-k", n0 - cv.p + cv.j) + "]";
      add_piece(neg, pre + "sum(k=1.." + present_index("n", n0 - cv.p - 1) +
                         ", " + inner + ")");
    }
    if (first) rhs = "0";
    MPoly D = rec.denom.subst_var(
        0, MPoly::variable(1, 0) + MPoly::constant(1, Rat(n0)));
    out += "\n  a[" + present_index("n", m) + "] = -(" + rhs + ") / (" +
           D.to_string(names) + ")   for n >= 0";
  }
  for (size_t i = 0; i < rep.ivals.size(); ++i)
    out += "\n  a[" + std::to_string(i) + "] = " + to_string(rep.ivals[i]);
  return out;
}

}  // namespace qfps
