#include "qfps/series.hpp"

#include <algorithm>
#include <cassert>

namespace qfps {

namespace {

TruncSeries ts_const(const Rat& v, int bound) {
  TruncSeries r;
  r.off = 0;
  r.valid = bound;
  r.c.assign(std::max(bound, 0), Rat(0));
  if (!is_zero(v)) {
    if (bound <= 0) throw PrecisionShortfall{};
    r.c[0] = v;
  }
  return r;
}

TruncSeries ts_z(int bound) {
  TruncSeries r;
  r.off = 1;
  r.valid = bound;
  if (bound > 1) {
    r.c.assign(bound - 1, Rat(0));
    r.c[0] = Rat(1);
  }
  return r;
}

}  // namespace

TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries r;
  r.off = std::min(a.off, b.off);
  r.valid = std::min(a.valid, b.valid);
  r.c.assign(std::max(r.valid - r.off, 0), Rat(0));
  for (int x = r.off; x < r.valid; ++x) {
    Rat v(0);
    if (x >= a.off && x < a.valid) v += a.c[x - a.off];
    if (x >= b.off && x < b.valid) v += b.c[x - b.off];
    r.c[x - r.off] = v;
  }
  return r;
}

TruncSeries ts_neg(const TruncSeries& a) { return ts_scale(a, Rat(-1)); }

TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b) {
  return ts_add(a, ts_neg(b));
}

TruncSeries ts_scale(const TruncSeries& a, const Rat& s) {
  TruncSeries r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b, int bound) {
  TruncSeries r;
  int va = a.vbound(), vb = b.vbound();
  r.off = a.off + b.off;
  r.valid = std::min({a.valid + vb, b.valid + va, bound});
  r.c.assign(std::max(r.valid - r.off, 0), Rat(0));
  for (int i = 0; i < (int)a.c.size(); ++i) {
    if (is_zero(a.c[i])) continue;
    int xa = a.off + i;
    for (int j = 0; j < (int)b.c.size(); ++j) {
      int x = xa + b.off + j;
      if (x >= r.valid) break;
      if (x < r.off) continue;
      if (is_zero(b.c[j])) continue;
      r.c[x - r.off] += a.c[i] * b.c[j];
    }
  }
  return r;
}

TruncSeries ts_recip(const TruncSeries& a, int bound) {
  auto val = a.valuation();
  if (!val) throw PrecisionShortfall{};
  int v = *val;
  int len = std::min(a.valid - v, bound + v);  // unit-part coefficients
  if (len <= 0) throw PrecisionShortfall{};
  std::vector<Rat> u(a.c.begin() + (v - a.off), a.c.begin() + (v - a.off) + len);
  std::vector<Rat> w(len);
  w[0] = Rat(1) / u[0];
  for (int n = 1; n < len; ++n) {
    Rat s(0);
    for (int i = 1; i <= n; ++i) s += u[i] * w[n - i];
    w[n] = -s / u[0];
  }
  TruncSeries r;
  r.off = -v;
  r.valid = std::min(-v + len, bound);
  r.c.assign(std::max(r.valid - r.off, 0), Rat(0));
  for (int i = 0; i < r.valid - r.off; ++i) r.c[i] = w[i];
  return r;
}

TruncSeries ts_pow(const TruncSeries& a, int n, int bound) {
  if (n == 0) return ts_const(Rat(1), bound);
  TruncSeries base = n < 0 ? ts_recip(a, bound) : a;
  unsigned m = n < 0 ? -(unsigned)n : (unsigned)n;
  TruncSeries r = ts_const(Rat(1), bound);
  for (;;) {
    if (m & 1) r = ts_mul(r, base, bound);
    m >>= 1;
    if (!m) break;
    base = ts_mul(base, base, bound);
  }
  return r;
}

TruncSeries ts_derivative(const TruncSeries& a) {
  TruncSeries r;
  r.off = a.off - 1;
  r.valid = a.valid - 1;
  r.c.assign(std::max(r.valid - r.off, 0), Rat(0));
  for (int i = 0; i < (int)r.c.size(); ++i) {
    int x = a.off + i;  // source exponent
    r.c[i] = a.c[i] * Rat(x);
  }
  return r;
}

namespace {

// Maclaurin coefficient streams for the primitive functions, exponents
// 0..len-1. "Log" means log(1+u), "Sqrt" means (1+u)^(1/2).
enum class Prim { Exp, Log1p, Sin, Cos, Sinh, Cosh, Arcsin, Arctan, Arcsinh, Arctanh, Sqrt1p };

std::vector<Rat> maclaurin(Prim f, int len) {
  std::vector<Rat> c(std::max(len, 0), Rat(0));
  if (len <= 0) return c;
  switch (f) {
    case Prim::Exp: {
      Rat t(1);
      for (int n = 0; n < len; ++n) {
        c[n] = t;
        t /= Rat(n + 1);
      }
      break;
    }
    case Prim::Log1p:
      for (int n = 1; n < len; ++n) c[n] = Rat((n % 2) ? 1 : -1, n);
      break;
    case Prim::Sin:
    case Prim::Sinh: {
      Rat t(1);
      for (int n = 1; n < len; n += 2) {
        if (n > 1) t /= Rat(n * (n - 1));
        c[n] = (f == Prim::Sin && ((n / 2) % 2 == 1)) ? -t : t;
      }
      break;
    }
    case Prim::Cos:
    case Prim::Cosh: {
      Rat t(1);
      for (int n = 0; n < len; n += 2) {
        if (n > 0) t /= Rat(n * (n - 1));
        c[n] = (f == Prim::Cos && ((n / 2) % 2 == 1)) ? -t : t;
      }
      break;
    }
    case Prim::Arcsin:
    case Prim::Arcsinh: {
      // sum binom(2m, m)/4^m * u^(2m+1)/(2m+1), alternating for arcsinh
      Rat b(1);
      for (int m = 0; 2 * m + 1 < len; ++m) {
        if (m > 0) b *= Rat((2 * m - 1), 2 * m);
        Rat v = b / Rat(2 * m + 1);
        c[2 * m + 1] = (f == Prim::Arcsinh && (m % 2 == 1)) ? -v : v;
      }
      break;
    }
    case Prim::Arctan:
    case Prim::Arctanh:
      for (int m = 0; 2 * m + 1 < len; ++m) {
        Rat v(1, 2 * m + 1);
        c[2 * m + 1] = (f == Prim::Arctan && (m % 2 == 1)) ? -v : v;
      }
      break;
    case Prim::Sqrt1p: {
      // binom(1/2, n)
      Rat b(1);
      c[0] = b;
      for (int n = 1; n < len; ++n) {
        b *= (Rat(1, 2) - Rat(n - 1)) / Rat(n);
        c[n] = b;
      }
      break;
    }
  }
  return c;
}

struct Evaluator {
  int bound;

  TruncSeries compose(const std::vector<Rat>& g, const TruncSeries& h) const {
    // Horner; requires vbound(h) >= 1 so truncating g is harmless.
    assert(h.vbound() >= 1);
    TruncSeries r = ts_const(g.empty() ? Rat(0) : g.back(), bound);
    r.valid = std::min(r.valid, h.valid);
    r.c.resize(std::max(r.valid - r.off, 0));
    for (int i = (int)g.size() - 2; i >= 0; --i) {
      r = ts_mul(r, h, bound);
      r = ts_add(r, ts_const(g[i], bound));
    }
    return r;
  }

  TruncSeries compose_prim(Prim f, const TruncSeries& h) const {
    int vb = h.vbound();
    int K = vb > 0 ? (bound + vb - 1) / vb + 1 : bound;
    return compose(maclaurin(f, K), h);
  }

  TruncSeries apply(Func f, const TruncSeries& a) const {
    switch (f) {
      case Func::Tan:
        return ts_mul(compose_checked(Prim::Sin, a, "tan"),
                      ts_recip(compose_checked(Prim::Cos, a, "tan"), bound), bound);
      case Func::Sec:
        return ts_recip(compose_checked(Prim::Cos, a, "sec"), bound);
      case Func::Csc:
        return ts_recip(compose_checked(Prim::Sin, a, "csc"), bound);
      case Func::Cot:
        return ts_mul(compose_checked(Prim::Cos, a, "cot"),
                      ts_recip(compose_checked(Prim::Sin, a, "cot"), bound), bound);
      case Func::Tanh:
        return ts_mul(compose_checked(Prim::Sinh, a, "tanh"),
                      ts_recip(compose_checked(Prim::Cosh, a, "tanh"), bound), bound);
      case Func::Exp: return compose_checked(Prim::Exp, a, "exp");
      case Func::Sin: return compose_checked(Prim::Sin, a, "sin");
      case Func::Cos: return compose_checked(Prim::Cos, a, "cos");
      case Func::Sinh: return compose_checked(Prim::Sinh, a, "sinh");
      case Func::Cosh: return compose_checked(Prim::Cosh, a, "cosh");
      case Func::Arcsin: return compose_checked(Prim::Arcsin, a, "arcsin");
      case Func::Arctan: return compose_checked(Prim::Arctan, a, "arctan");
      case Func::Arcsinh: return compose_checked(Prim::Arcsinh, a, "arcsinh");
      case Func::Arctanh: return compose_checked(Prim::Arctanh, a, "arctanh");
      case Func::Log: return apply_log(a);
      case Func::Sqrt: return apply_sqrt(a);
    }
    throw SeriesError(SeriesError::Kind::Unsupported, "series: unknown function");
  }

  TruncSeries compose_checked(Prim p, const TruncSeries& a, const char* name) const {
    int vb = a.vbound();
    if (vb < 0)
      throw SeriesError(SeriesError::Kind::Unsupported,
                        std::string("series: ") + name +
                            " of a Laurent series with a pole (essential singularity)");
    if (vb == 0)
      throw SeriesError(SeriesError::Kind::Unsupported,
                        std::string("series: ") + name +
                            " at a nonzero point has non-rational coefficients");
    return compose_prim(p, a);
  }

  TruncSeries apply_log(const TruncSeries& a) const {
    int vb = a.vbound();
    if (vb != 0)
      throw SeriesError(SeriesError::Kind::Branch,
                        "series: log of a series with valuation != 0");
    if (a.coeff(0) != 1)
      throw SeriesError(SeriesError::Kind::Branch,
                        "series: log at a constant term other than 1");
    TruncSeries u = ts_add(a, ts_const(Rat(-1), bound));
    return compose_prim(Prim::Log1p, u);
  }

  TruncSeries apply_sqrt(const TruncSeries& a) const {
    auto val = a.valuation();
    if (!val) throw PrecisionShortfall{};
    int v = *val;
    if (v % 2 != 0)
      throw SeriesError(SeriesError::Kind::Puiseux,
                        "series: sqrt of odd valuation needs Puiseux series");
    Rat lead = a.coeff(v);
    auto s = rat_sqrt(lead);
    if (!s)
      throw SeriesError(SeriesError::Kind::Unsupported,
                        "series: sqrt leading coefficient is not a rational square");
    // a = lead * z^v * (1 + w), sqrt(a) = sqrt(lead) * z^(v/2) * (1+w)^(1/2)
    TruncSeries unit;
    unit.off = 0;
    unit.valid = a.valid - v;
    unit.c.assign(std::max(unit.valid, 0), Rat(0));
    for (int x = 0; x < unit.valid; ++x)
      unit.c[x] = a.coeff(v + x) / lead;
    TruncSeries w = ts_add(unit, ts_const(Rat(-1), bound));
    TruncSeries root = compose_prim(Prim::Sqrt1p, w);
    root = ts_scale(root, *s);
    root.off += v / 2;
    root.valid += v / 2;
    return root;
  }

  TruncSeries eval(const Expr& e) const {
    switch (e.kind()) {
      case ExprKind::Number: return ts_const(e.number_value(), bound);
      case ExprKind::Z: return ts_z(bound);
      case ExprKind::Param:
        throw SeriesError(SeriesError::Kind::Parameterized,
                          "series: parameters are not allowed");
      case ExprKind::Sum: {
        TruncSeries r = ts_const(Rat(0), bound);
        for (auto& t : e.operands()) r = ts_add(r, eval(t));
        return r;
      }
      case ExprKind::Product: {
        TruncSeries r = ts_const(Rat(1), bound);
        for (auto& t : e.operands()) r = ts_mul(r, eval(t), bound);
        return r;
      }
      case ExprKind::Power: {
        auto n = e.exponent().as_long();
        if (!n)
          throw SeriesError(SeriesError::Kind::Parameterized,
                            "series: parameter exponents are not allowed");
        return ts_pow(eval(e.base()), (int)*n, bound);
      }
      case ExprKind::App: return apply(e.func(), eval(e.arg()));
    }
    throw SeriesError(SeriesError::Kind::Unsupported, "series: bad expression");
  }
};

}  // namespace

TruncSeries series_of(const Expr& e, int order) {
  std::set<std::string> ps;
  e.collect_params(ps);
  if (!ps.empty())
    throw SeriesError(SeriesError::Kind::Parameterized,
                      "series: parameters are not allowed here");
  int slack = 8;
  for (int attempt = 0; attempt < 9; ++attempt, slack *= 2) {
    Evaluator ev{order + 1 + slack};
    try {
      TruncSeries r = ev.eval(e);
      if (r.valid < order + 1) throw PrecisionShortfall{};
      // Trim to the requested window.
      TruncSeries out;
      out.off = r.off;
      out.valid = order + 1;
      if (out.off > out.valid) out.off = out.valid;
      out.c.assign(out.valid - out.off, Rat(0));
      for (int x = out.off; x < out.valid; ++x)
        if (x >= r.off) out.c[x - out.off] = r.c[x - r.off];
      return out;
    } catch (const PrecisionShortfall&) {
      continue;
    }
  }
  throw SeriesError(SeriesError::Kind::Precision,
                    "series: could not reach the requested order "
                    "(deep cancellation or an identically zero divisor)");
}

std::optional<int> valuation(const Expr& e, int cap) {
  for (int t = 8;; t *= 2) {
    if (t > cap) t = cap;
    TruncSeries s = series_of(e, t);
    if (auto v = s.valuation()) return v;
    if (t >= cap) return std::nullopt;
  }
}

}  // namespace qfps
