#include "qfps/tower.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace qfps {

Tower::Tower(std::vector<std::string> params, int depth_limit)
    : params_(std::move(params)), depth_limit_(std::max(depth_limit, 1)) {}

std::vector<std::string> Tower::var_names() const {
  std::vector<std::string> names;
  names.push_back("z");
  for (auto& p : params_) names.push_back(p);
  for (size_t i = 0; i < kernels_.size(); ++i)
    names.push_back("[" + kernels_[i].def.to_string() + "]");
  return names;
}

CanonicalForm Tower::constant(const Rat& c) const {
  return CanonicalForm(this, RatFunc::constant(nvars(), c));
}

// ---------------------------------------------------------------------------
// Reduction modulo kernel relations.

namespace {

bool is_relation_kind(Kernel::Kind k) {
  return k == Kernel::Kind::Sin || k == Kernel::Kind::Sinh ||
         k == Kernel::Kind::Sqrt;
}

}  // namespace

RatFunc Tower::reduce_poly(MPoly p) const {
  const int nv = nvars();
  p = p.extended(nv);
  MPoly den = MPoly::constant(nv, Rat(1));
  for (int guard = 0; guard < 1000; ++guard) {
    int v = -1, k = -1;
    // Highest-indexed relation kernel with degree >= 2 first; its
    // relation only involves earlier kernels.
    for (int ki = nkernels() - 1; ki >= 0; --ki) {
      if (!is_relation_kind(kernels_[ki].kind)) continue;
      if (p.degree_in(kernel_var(ki)) >= 2) {
        v = kernel_var(ki);
        k = ki;
        break;
      }
    }
    if (v < 0) return RatFunc(p, den);

    const Kernel& K = kernels_[k];
    MPoly sq(nv);  // polynomial substitute for x_v^2, when polynomial
    MPoly sq_num(nv), sq_den(nv);
    if (K.kind == Kernel::Kind::Sin) {
      // sin^2 = 1 - cos^2
      sq = MPoly::constant(nv, Rat(1)) -
           MPoly::variable(nv, kernel_var(K.partner), 2);
      sq_num = sq;
      sq_den = MPoly::constant(nv, Rat(1));
    } else if (K.kind == Kernel::Kind::Sinh) {
      // sinh^2 = cosh^2 - 1
      sq = MPoly::variable(nv, kernel_var(K.partner), 2) -
           MPoly::constant(nv, Rat(1));
      sq_num = sq;
      sq_den = MPoly::constant(nv, Rat(1));
    } else {
      // sqrt^2 = radicand (a rational function)
      sq_num = K.radicand.num().extended(nv);
      sq_den = K.radicand.den().extended(nv);
    }

    int amax = 0;
    for (auto& [m, c] : p.terms()) amax = std::max(amax, m.e[v] / 2);
    MPoly out(nv);
    for (auto& [m, c] : p.terms()) {
      int a = m.e[v] / 2, b = m.e[v] % 2;
      Monomial base = m;
      base.e[v] = b;
      MPoly t(nv);
      t.add_term(base, c);
      out += t * sq_num.pow(a) * sq_den.pow(amax - a);
    }
    p = std::move(out);
    den = den * sq_den.pow(amax);
  }
  throw TowerError("tower: reduction did not terminate");
}

RatFunc Tower::reduce(RatFunc f) const {
  const int nv = nvars();
  RatFunc rn = reduce_poly(f.num().extended(nv));
  RatFunc rd = reduce_poly(f.den().extended(nv));
  if (rd.is_zero())
    throw TowerError("tower: denominator vanishes modulo kernel relations");
  RatFunc r = rn / rd;

  // Clear relation kernels from the denominator by conjugation.
  for (int guard = 0; guard < 1000; ++guard) {
    int v = -1, k = -1;
    for (int ki = nkernels() - 1; ki >= 0; --ki) {
      if (!is_relation_kind(kernels_[ki].kind)) continue;
      if (r.den().degree_in(kernel_var(ki)) >= 1) {
        v = kernel_var(ki);
        k = ki;
        break;
      }
    }
    if (v < 0) return r;
    // den = A + B x_v with deg_v <= 1 after reduction.
    MPoly A = r.den().coefficient_of(v, 0);
    MPoly B = r.den().coefficient_of(v, 1);
    MPoly conj = A - B * MPoly::variable(nvars(), v, 1);
    if (conj.is_zero()) {
      // den is exactly B x_v; multiply by x_v instead.
      conj = MPoly::variable(nvars(), v, 1);
    }
    RatFunc cnum = reduce_poly(r.num() * conj);
    RatFunc cden = reduce_poly(r.den() * conj);
    if (cden.is_zero())
      throw TowerError("tower: denominator vanishes modulo kernel relations");
    r = cnum / cden;
    (void)k;
  }
  throw TowerError("tower: denominator rationalization did not terminate");
}

// ---------------------------------------------------------------------------
// Differentiation through the tower.

RatFunc Tower::poly_dz(const MPoly& p) const {
  const int nv = nvars();
  MPoly pe = p.extended(nv);
  RatFunc acc = RatFunc::from_poly(pe.derivative(0));
  for (int k = 0; k < nkernels(); ++k) {
    MPoly pd = pe.derivative(kernel_var(k));
    if (pd.is_zero()) continue;
    acc = acc + RatFunc::from_poly(pd) * kernels_[k].derivative.extended(nv);
  }
  return acc;
}

RatFunc Tower::d_dz(const RatFunc& f) const {
  const int nv = nvars();
  RatFunc n = f.num().extended(nv).is_zero()
                  ? RatFunc(nv)
                  : RatFunc::from_poly(f.num().extended(nv));
  RatFunc d = RatFunc::from_poly(f.den().extended(nv));
  RatFunc dn = poly_dz(f.num());
  RatFunc dd = poly_dz(f.den());
  return reduce((dn * d - n * dd) / (d * d));
}

// ---------------------------------------------------------------------------
// Canonicalization and kernel discovery.

int Tower::ensure_kernel(Kernel::Kind kind, const Expr& def,
                         const RatFunc& arg_cf, const std::string& param,
                         int depth) {
  const int nv0 = nvars();
  RatFunc key = arg_cf.extended(nv0);
  for (int k = 0; k < nkernels(); ++k) {
    const Kernel& K = kernels_[k];
    if (K.kind != kind || K.param != param) continue;
    if (K.arg.extended(nv0).equals(key)) return k;
  }
  // Nesting depth: one past the deepest kernel the argument references.
  int nest = 1;
  for (auto* part : {&key.num(), &key.den()}) {
    for (auto& [m, c] : part->terms())
      for (int k = 0; k < nkernels(); ++k)
        if (m.e[kernel_var(k)] != 0)
          nest = std::max(nest, kernels_[k].depth + 1);
  }
  if (nest > depth_limit_ || nkernels() >= 64)
    throw TowerError("tower: not canonicalizable within depth limit (" +
                     def.to_string() + ")");

  auto push = [&](Kernel::Kind kd, const Expr& d, const RatFunc& a) {
    Kernel K;
    K.kind = kd;
    K.def = d;
    K.arg = a;
    K.param = param;
    K.derivative = RatFunc(nvars() + 1);  // placeholder
    K.depth = nest;
    kernels_.push_back(std::move(K));
    return nkernels() - 1;
  };

  RatFunc da = d_dz(arg_cf);  // over current vars; extend after pushes

  switch (kind) {
    case Kernel::Kind::Exp: {
      int k = push(kind, def, arg_cf);
      kernels_[k].derivative =
          reduce(da.extended(nvars()) * var(kernel_var(k)));
      return k;
    }
    case Kernel::Kind::Log: {
      if (arg_cf.is_zero()) throw TowerError("tower: log of zero");
      int k = push(kind, def, arg_cf);
      kernels_[k].derivative =
          reduce(da.extended(nvars()) / arg_cf.extended(nvars()));
      return k;
    }
    case Kernel::Kind::Sin:
    case Kernel::Kind::Cos: {
      int s = push(Kernel::Kind::Sin, Expr::app(Func::Sin, def.arg()), arg_cf);
      int c = push(Kernel::Kind::Cos, Expr::app(Func::Cos, def.arg()), arg_cf);
      kernels_[s].partner = c;
      kernels_[c].partner = s;
      RatFunc d = da.extended(nvars());
      kernels_[s].derivative = reduce(d * var(kernel_var(c)));
      kernels_[c].derivative = reduce(-(d * var(kernel_var(s))));
      return kind == Kernel::Kind::Sin ? s : c;
    }
    case Kernel::Kind::Sinh:
    case Kernel::Kind::Cosh: {
      int s = push(Kernel::Kind::Sinh, Expr::app(Func::Sinh, def.arg()), arg_cf);
      int c = push(Kernel::Kind::Cosh, Expr::app(Func::Cosh, def.arg()), arg_cf);
      kernels_[s].partner = c;
      kernels_[c].partner = s;
      RatFunc d = da.extended(nvars());
      kernels_[s].derivative = reduce(d * var(kernel_var(c)));
      kernels_[c].derivative = reduce(d * var(kernel_var(s)));
      return s + (kind == Kernel::Kind::Sinh ? 0 : 1);
    }
    case Kernel::Kind::Sqrt: {
      if (arg_cf.is_zero()) throw TowerError("tower: sqrt of zero");
      int k = push(kind, def, arg_cf);
      kernels_[k].radicand = arg_cf;
      // R' = arg' R / (2 arg)
      int nv = nvars();
      kernels_[k].derivative =
          reduce(da.extended(nv) * var(kernel_var(k)) /
                 (RatFunc::constant(nv, Rat(2)) * arg_cf.extended(nv)));
      return k;
    }
    case Kernel::Kind::Arcsin:
    case Kernel::Kind::Arcsinh: {
      // Derivative needs sqrt(1 -+ u^2) in the tower first.
      Rat sign = kind == Kernel::Kind::Arcsin ? Rat(-1) : Rat(1);
      RatFunc rad =
          RatFunc::constant(nvars(), Rat(1)) + arg_cf * arg_cf * RatFunc::constant(nvars(), sign);
      rad = reduce(rad);
      Expr rad_expr = Expr::integer(1) +
                      Expr::number(sign) * Expr::power(def.arg(), 2);
      int r = ensure_kernel(Kernel::Kind::Sqrt, Expr::app(Func::Sqrt, rad_expr),
                            rad, "", depth + 1);
      int k = push(kind, def, arg_cf);
      int nv = nvars();
      // u' / R = u' R / rad
      kernels_[k].derivative = reduce(da.extended(nv) * var(kernel_var(r)) /
                                      rad.extended(nv));
      return k;
    }
    case Kernel::Kind::Arctan:
    case Kernel::Kind::Arctanh: {
      Rat sign = kind == Kernel::Kind::Arctan ? Rat(1) : Rat(-1);
      int k = push(kind, def, arg_cf);
      int nv = nvars();
      RatFunc den = RatFunc::constant(nv, Rat(1)) +
                    arg_cf.extended(nv) * arg_cf.extended(nv) *
                        RatFunc::constant(nv, sign);
      RatFunc dr = reduce(den);
      if (dr.is_zero()) throw TowerError("tower: derivative denominator vanishes");
      kernels_[k].derivative = reduce(da.extended(nv) / dr);
      return k;
    }
    case Kernel::Kind::ParamPow: {
      if (arg_cf.is_zero()) throw TowerError("tower: zero base with parameter power");
      int k = push(kind, def, arg_cf);
      int nv = nvars();
      int pidx = -1;
      for (int i = 0; i < nparams(); ++i)
        if (params_[i] == param) pidx = 1 + i;
      if (pidx < 0) throw TowerError("tower: unknown parameter " + param);
      // (b^k)' = k (b'/b) b^k
      kernels_[k].derivative =
          reduce(var(pidx) * da.extended(nv) * var(kernel_var(k)) /
                 arg_cf.extended(nv));
      return k;
    }
  }
  throw TowerError("tower: unsupported kernel kind");
}

RatFunc Tower::canon(const Expr& e, int depth) {
  if (depth > 4 * depth_limit_)
    throw TowerError("tower: expression nesting exceeds depth limit");
  switch (e.kind()) {
    case ExprKind::Number:
      return RatFunc::constant(nvars(), e.number_value());
    case ExprKind::Z:
      return var(0);
    case ExprKind::Param: {
      for (int i = 0; i < nparams(); ++i)
        if (params_[i] == e.param_name()) return var(1 + i);
      throw TowerError("tower: undeclared parameter " + e.param_name());
    }
    case ExprKind::Sum: {
      RatFunc acc(nvars());
      for (auto& t : e.operands()) {
        RatFunc rhs = canon(t, depth);  // may grow the tower
        acc = acc.extended(nvars()) + rhs.extended(nvars());
      }
      return reduce(acc);
    }
    case ExprKind::Product: {
      RatFunc acc = RatFunc::constant(nvars(), Rat(1));
      for (auto& t : e.operands()) {
        RatFunc rhs = canon(t, depth);  // may grow the tower
        acc = acc.extended(nvars()) * rhs.extended(nvars());
      }
      return reduce(acc);
    }
    case ExprKind::Power: {
      RatFunc b = canon(e.base(), depth);
      const Exponent& ex = e.exponent();
      if (ex.is_constant()) {
        auto n = ex.as_long();
        if (!n)
          throw TowerError("tower: non-integer constant exponent");
        return reduce(b.pow((int)*n));
      }
      auto c = to_long(ex.coef);
      auto d = to_long(ex.cnst);
      if (!c || !d)
        throw TowerError("tower: exponent is not an integer combination of a parameter");
      // b^(c k + d) = (b^k)^c * b^d
      Expr kdef = Expr::power(e.base(), Exponent::parameter(ex.param));
      int K = ensure_kernel(Kernel::Kind::ParamPow, kdef, b, ex.param, depth + 1);
      return reduce(var(kernel_var(K)).pow((int)*c) * b.extended(nvars()).pow((int)*d));
    }
    case ExprKind::App: {
      Func f = e.func();
      // Trig and hyperbolic ratios rewrite to the pair kernels.
      if (f == Func::Tan || f == Func::Sec || f == Func::Csc || f == Func::Cot ||
          f == Func::Tanh) {
        RatFunc u = canon(e.arg(), depth);
        bool hyp = f == Func::Tanh;
        int s = ensure_kernel(hyp ? Kernel::Kind::Sinh : Kernel::Kind::Sin,
                              Expr::app(hyp ? Func::Sinh : Func::Sin, e.arg()), u,
                              "", depth + 1);
        int c = kernels_[s].partner;
        RatFunc S = var(kernel_var(s)), C = var(kernel_var(c));
        switch (f) {
          case Func::Tan: return reduce(S / C);
          case Func::Sec: return reduce(RatFunc::constant(nvars(), Rat(1)) / C);
          case Func::Csc: return reduce(RatFunc::constant(nvars(), Rat(1)) / S);
          case Func::Cot: return reduce(C / S);
          default: return reduce(S / C);  // tanh
        }
      }
      Kernel::Kind kind;
      switch (f) {
        case Func::Exp: kind = Kernel::Kind::Exp; break;
        case Func::Log: kind = Kernel::Kind::Log; break;
        case Func::Sin: kind = Kernel::Kind::Sin; break;
        case Func::Cos: kind = Kernel::Kind::Cos; break;
        case Func::Sinh: kind = Kernel::Kind::Sinh; break;
        case Func::Cosh: kind = Kernel::Kind::Cosh; break;
        case Func::Sqrt: kind = Kernel::Kind::Sqrt; break;
        case Func::Arcsin: kind = Kernel::Kind::Arcsin; break;
        case Func::Arctan: kind = Kernel::Kind::Arctan; break;
        case Func::Arcsinh: kind = Kernel::Kind::Arcsinh; break;
        case Func::Arctanh: kind = Kernel::Kind::Arctanh; break;
        default: throw TowerError("tower: unsupported function");
      }
      RatFunc u = canon(e.arg(), depth);
      int k = ensure_kernel(kind, e, reduce(u), "", depth + 1);
      return var(kernel_var(k));
    }
  }
  throw TowerError("tower: bad expression");
}

CanonicalForm Tower::canonicalize(const Expr& e) {
  return CanonicalForm(this, reduce(canon(e, 0)));
}

// ---------------------------------------------------------------------------
// CanonicalForm operations.

namespace {
const Tower* common_tower(const CanonicalForm& a, const CanonicalForm& b) {
  assert(a.tower() && b.tower() && a.tower() == b.tower());
  return a.tower();
}
}  // namespace

bool CanonicalForm::is_rational() const {
  const int np = tower_->nparams();
  for (auto* p : {&f_.num(), &f_.den()}) {
    for (auto& [m, c] : p->terms())
      for (size_t v = 1 + np; v < m.e.size(); ++v)
        if (m.e[v] != 0) return false;
  }
  return true;
}

CanonicalForm CanonicalForm::operator+(const CanonicalForm& o) const {
  const Tower* t = common_tower(*this, o);
  int nv = t->nvars();
  return CanonicalForm(t, t->reduce(f_.extended(nv) + o.f_.extended(nv)));
}

CanonicalForm CanonicalForm::operator-(const CanonicalForm& o) const {
  const Tower* t = common_tower(*this, o);
  int nv = t->nvars();
  return CanonicalForm(t, t->reduce(f_.extended(nv) - o.f_.extended(nv)));
}

CanonicalForm CanonicalForm::operator*(const CanonicalForm& o) const {
  const Tower* t = common_tower(*this, o);
  int nv = t->nvars();
  return CanonicalForm(t, t->reduce(f_.extended(nv) * o.f_.extended(nv)));
}

CanonicalForm CanonicalForm::operator/(const CanonicalForm& o) const {
  const Tower* t = common_tower(*this, o);
  int nv = t->nvars();
  return CanonicalForm(t, t->reduce(f_.extended(nv) / o.f_.extended(nv)));
}

CanonicalForm CanonicalForm::operator-() const {
  return CanonicalForm(tower_, -f_);
}

CanonicalForm CanonicalForm::pow(int n) const {
  return CanonicalForm(tower_, tower_->reduce(f_.pow(n)));
}

CanonicalForm CanonicalForm::derivative() const {
  return CanonicalForm(tower_, tower_->d_dz(f_));
}

bool CanonicalForm::equals(const CanonicalForm& o) const {
  const Tower* t = common_tower(*this, o);
  int nv = t->nvars();
  RatFunc d = f_.extended(nv) - o.f_.extended(nv);
  return t->reduce(d).is_zero();
}

std::string CanonicalForm::to_string() const {
  return f_.extended(tower_->nvars()).to_string(tower_->var_names());
}

// ---------------------------------------------------------------------------

std::vector<KernelRow> collect_kernel_coefficients(const CanonicalForm& cf) {
  const Tower* t = cf.tower();
  const int np = t->nparams();
  const int nk = t->nkernels();
  const MPoly num = cf.ratfunc().num().extended(t->nvars());

  std::map<std::vector<int>, MPoly> rows;
  for (auto& [m, c] : num.terms()) {
    std::vector<int> key(nk, 0);
    for (int k = 0; k < nk; ++k) key[k] = m.e[t->kernel_var(k)];
    Monomial proj{std::vector<int>(1 + np, 0)};
    for (int v = 0; v <= np; ++v) proj.e[v] = m.e[v];
    auto it = rows.find(key);
    if (it == rows.end()) it = rows.emplace(key, MPoly(1 + np)).first;
    it->second.add_term(proj, c);
  }
  std::vector<KernelRow> out;
  out.reserve(rows.size());
  for (auto& [key, poly] : rows)
    out.push_back(KernelRow{key, RatFunc::from_poly(poly)});
  return out;
}

TruncSeries cf_to_series(const CanonicalForm& cf, int order) {
  const Tower* t = cf.tower();
  if (t->nparams() > 0)
    throw SeriesError(SeriesError::Kind::Parameterized,
                      "cf_to_series: parameterized tower");
  int slack = 8;
  for (int attempt = 0; attempt < 9; ++attempt, slack *= 2) {
    int bound = order + 1 + slack;
    try {
      std::vector<TruncSeries> ks;
      for (int k = 0; k < t->nkernels(); ++k)
        ks.push_back(series_of(t->kernel(k).def, bound - 1));
      auto eval_poly = [&](const MPoly& p) {
        TruncSeries acc;
        acc.off = 0;
        acc.valid = bound;
        acc.c.assign(bound, Rat(0));
        TruncSeries zs;
        zs.off = 1;
        zs.valid = bound;
        zs.c.assign(bound - 1, Rat(0));
        if (bound > 1) zs.c[0] = Rat(1);
        for (auto& [m, c] : p.terms()) {
          TruncSeries term;
          term.off = 0;
          term.valid = bound;
          term.c.assign(bound, Rat(0));
          term.c[0] = c;
          if (m.e[0] > 0) term = ts_mul(term, ts_pow(zs, m.e[0], bound), bound);
          for (int k = 0; k < t->nkernels(); ++k) {
            int e = m.e[t->kernel_var(k)];
            if (e != 0) term = ts_mul(term, ts_pow(ks[k], e, bound), bound);
          }
          acc = ts_add(acc, term);
        }
        return acc;
      };
      const MPoly num = cf.ratfunc().num().extended(t->nvars());
      const MPoly den = cf.ratfunc().den().extended(t->nvars());
      TruncSeries r = ts_mul(eval_poly(num), ts_recip(eval_poly(den), bound), bound);
      if (r.valid < order + 1) throw PrecisionShortfall{};
      TruncSeries out;
      out.off = std::min(r.off, order + 1);
      out.valid = order + 1;
      out.c.assign(out.valid - out.off, Rat(0));
      for (int x = out.off; x < out.valid; ++x)
        if (x >= r.off) out.c[x - out.off] = r.c[x - r.off];
      return out;
    } catch (const PrecisionShortfall&) {
      continue;
    }
  }
  throw SeriesError(SeriesError::Kind::Precision,
                    "cf_to_series: could not reach the requested order");
}

}  // namespace qfps
