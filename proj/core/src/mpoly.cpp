#include "qfps/mpoly.hpp"

#include <algorithm>
#include <cassert>
#include <climits>

namespace qfps {

MPoly MPoly::constant(int nvars, const Rat& c) {
  MPoly p(nvars);
  if (!qfps::is_zero(c)) p.terms_[Monomial{std::vector<int>(nvars, 0)}] = c;
  return p;
}

MPoly MPoly::variable(int nvars, int idx, int power) {
  assert(idx >= 0 && idx < nvars);
  MPoly p(nvars);
  Monomial m{std::vector<int>(nvars, 0)};
  m.e[idx] = power;
  p.terms_[m] = Rat(1);
  return p;
}

bool MPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.total_degree() == 0;
}

Rat MPoly::constant_value() const {
  if (terms_.empty()) return Rat(0);
  assert(is_constant());
  return terms_.begin()->second;
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return terms_.begin()->first.total_degree();
}

int MPoly::degree_in(int var) const {
  int d = -1;
  for (auto& [m, c] : terms_) d = std::max(d, m.e[var]);
  return d;
}

int MPoly::low_degree_in(int var) const {
  int d = -1;
  for (auto& [m, c] : terms_)
    d = (d < 0) ? m.e[var] : std::min(d, m.e[var]);
  return d;
}

void MPoly::add_term(const Monomial& m, const Rat& c) {
  assert((int)m.e.size() == nvars_);
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (!qfps::is_zero(c)) terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (qfps::is_zero(it->second)) terms_.erase(it);
}

MPoly MPoly::operator-() const {
  MPoly r(nvars_);
  for (auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  assert(nvars_ == o.nvars_);
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  assert(nvars_ == o.nvars_);
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r = *this;
  r += o;
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  MPoly r = *this;
  r -= o;
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  assert(nvars_ == o.nvars_);
  MPoly r(nvars_);
  for (auto& [ma, ca] : terms_) {
    for (auto& [mb, cb] : o.terms_) {
      Monomial m = ma;
      for (int i = 0; i < nvars_; ++i) m.e[i] += mb.e[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

MPoly MPoly::operator*(const Rat& c) const {
  MPoly r(nvars_);
  if (qfps::is_zero(c)) return r;
  for (auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

MPoly operator*(const Rat& c, const MPoly& p) { return p * c; }

MPoly MPoly::pow(int n) const {
  assert(n >= 0);
  MPoly r = MPoly::constant(nvars_, Rat(1));
  MPoly b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

MPoly MPoly::derivative(int var) const {
  MPoly r(nvars_);
  for (auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    Monomial d = m;
    d.e[var] -= 1;
    r.add_term(d, c * Rat(m.e[var]));
  }
  return r;
}

MPoly MPoly::divide_exact(const MPoly& d) const {
  assert(nvars_ == d.nvars_);
  if (d.is_zero()) throw std::domain_error("mpoly: division by zero");
  MPoly rem = *this;
  MPoly quot(nvars_);
  const Monomial& dm = d.leading_monomial();
  const Rat& dc = d.leading_coefficient();
  while (!rem.is_zero()) {
    const Monomial& rm = rem.leading_monomial();
    Monomial q = rm;
    for (int i = 0; i < nvars_; ++i) {
      q.e[i] -= dm.e[i];
      if (q.e[i] < 0) throw std::domain_error("mpoly: inexact division");
    }
    Rat qc = rem.leading_coefficient() / dc;
    MPoly t(nvars_);
    t.terms_[q] = qc;
    quot += t;
    rem -= t * d;
  }
  return quot;
}

MPoly MPoly::eval_var(int var, const Rat& value) const {
  MPoly r(nvars_);
  for (auto& [m, c] : terms_) {
    Monomial n = m;
    int k = n.e[var];
    n.e[var] = 0;
    r.add_term(n, c * rat_pow(value, k));
  }
  return r;
}

MPoly MPoly::subst_var(int var, const MPoly& value) const {
  assert(value.nvars() == nvars_);
  MPoly r(nvars_);
  for (auto& [m, c] : terms_) {
    Monomial n = m;
    int k = n.e[var];
    n.e[var] = 0;
    MPoly t(nvars_);
    t.terms_[n] = c;
    if (k > 0) t = t * value.pow(k);
    r += t;
  }
  return r;
}

Rat MPoly::content() const {
  if (terms_.empty()) return Rat(0);
  Int num_gcd = 0, den_lcm = 1;
  for (auto& [m, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  return make_rat(num_gcd, den_lcm);
}

MPoly MPoly::primitive_part() const {
  if (terms_.empty()) return *this;
  Rat c = content();
  if (sgn(leading_coefficient()) < 0) c = -c;
  return *this * (Rat(1) / c);
}

const Monomial& MPoly::leading_monomial() const {
  assert(!terms_.empty());
  return terms_.begin()->first;
}

const Rat& MPoly::leading_coefficient() const {
  assert(!terms_.empty());
  return terms_.begin()->second;
}

MPoly MPoly::leading_coefficient_in(int var) const {
  return coefficient_of(var, degree_in(var));
}

MPoly MPoly::coefficient_of(int var, int k) const {
  MPoly r(nvars_);
  for (auto& [m, c] : terms_) {
    if (m.e[var] != k) continue;
    Monomial n = m;
    n.e[var] = 0;
    r.add_term(n, c);
  }
  return r;
}

MPoly MPoly::extended(int new_nvars) const {
  assert(new_nvars >= nvars_);
  if (new_nvars == nvars_) return *this;
  MPoly r(new_nvars);
  for (auto& [m, c] : terms_) {
    Monomial n = m;
    n.e.resize(new_nvars, 0);
    r.terms_[n] = c;
  }
  return r;
}

std::string MPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    Rat a = c;
    if (first) {
      if (sgn(a) < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += sgn(a) < 0 ? " - " : " + ";
      if (sgn(a) < 0) a = -a;
    }
    first = false;
    std::string vars;
    for (int i = 0; i < nvars_; ++i) {
      if (m.e[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += names[i];
      if (m.e[i] != 1) vars += "^" + std::to_string(m.e[i]);
    }
    if (vars.empty()) {
      out += qfps::to_string(a);
    } else {
      if (a != 1) out += qfps::to_string(a) + "*";
      out += vars;
    }
  }
  return out;
}

namespace {

// View of p as univariate in `var` with MPoly coefficients.
std::map<int, MPoly> by_degree(const MPoly& p, int var) {
  std::map<int, MPoly> out;
  int d = p.degree_in(var);
  for (int k = 0; k <= d; ++k) {
    MPoly c = p.coefficient_of(var, k);
    if (!c.is_zero()) out.emplace(k, std::move(c));
  }
  return out;
}

MPoly from_degrees(const std::map<int, MPoly>& cs, int var, int nvars) {
  MPoly r(nvars);
  for (auto& [k, c] : cs) r += c * MPoly::variable(nvars, var, k);
  return r;
}

// gcd of all coefficients of p in `var` (recursive content).
MPoly poly_content_in(const MPoly& p, int var) {
  MPoly g(p.nvars());
  for (auto& [k, c] : by_degree(p, var)) g = gcd(g, c);
  return g;
}

// Pseudo-remainder of a by b in variable var, normalized to primitive
// after each elimination step (only gcd consumes this, where any scalar
// multiple serves).
MPoly prem(MPoly a, const MPoly& b, int var) {
  int db = b.degree_in(var);
  MPoly lb = b.coefficient_of(var, db);
  while (!a.is_zero() && a.degree_in(var) >= db) {
    int da = a.degree_in(var);
    MPoly la = a.coefficient_of(var, da);
    a = a * lb - b * la * MPoly::variable(a.nvars(), var, da - db);
    a = a.primitive_part();
  }
  return a;
}

}  // namespace

namespace {

// Exponent-wise min over all monomials: the common monomial factor.
MPoly monomial_gcd(const MPoly& a, const MPoly& b) {
  int nv = a.nvars();
  std::vector<int> low(nv, INT_MAX);
  for (auto* p : {&a, &b})
    for (auto& [m, c] : p->terms())
      for (int v = 0; v < nv; ++v) low[v] = std::min(low[v], m.e[v]);
  MPoly g(nv);
  g.add_term(Monomial{low}, Rat(1));
  return g;
}

bool divides_exactly(const MPoly& d, const MPoly& a) {
  try {
    (void)a.divide_exact(d);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

// Evaluate an integer-coefficient polynomial at small integer points.
Int eval_at_point(const MPoly& p, int salt) {
  static const long pts[] = {3, -5, 7, -11, 13, -17, 19, -23, 29, -31};
  Int total = 0;
  for (auto& [m, c] : p.terms()) {
    Int term = c.get_num();
    for (size_t v = 0; v < m.e.size(); ++v) {
      if (m.e[v] == 0) continue;
      Int base = pts[(v + salt) % 10];
      Int pw;
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), m.e[v]);
      term *= pw;
    }
    total += term;
  }
  return total;
}

// Coprime integer evaluations prove the gcd is constant. A shared factor
// can slip through only by evaluating to +-1 at both points; the fraction
// then stays unreduced, which cross-multiplication equality tolerates.
// Used for multivariate pairs only; the univariate gcd in z stays exact.
bool probably_coprime(const MPoly& a, const MPoly& b) {
  for (int salt = 0; salt < 2; ++salt) {
    Int va = eval_at_point(a, salt);
    Int vb = eval_at_point(b, salt);
    Int g;
    mpz_gcd(g.get_mpz_t(), va.get_mpz_t(), vb.get_mpz_t());
    if (g == 1) return true;
  }
  return false;
}

int used_variable_count(const MPoly& a, const MPoly& b) {
  int used = 0;
  for (int v = 0; v < a.nvars(); ++v)
    if (a.degree_in(v) > 0 || b.degree_in(v) > 0) ++used;
  return used;
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  assert(a.nvars() == b.nvars());
  int nv = a.nvars();

  if (a.is_constant() || b.is_constant()) return MPoly::constant(nv, Rat(1));

  // Cheap wins first: equal inputs, a monomial side, or exact division.
  MPoly pa = a.primitive_part();
  MPoly pb = b.primitive_part();
  if (pa == pb) return pa;
  if (pa.terms().size() == 1 || pb.terms().size() == 1) {
    MPoly g = monomial_gcd(pa, pb);
    return g;
  }
  if (used_variable_count(pa, pb) >= 2 && probably_coprime(pa, pb))
    return MPoly::constant(nv, Rat(1));
  if (pa.total_degree() <= pb.total_degree() && divides_exactly(pa, pb)) return pa;
  if (pb.total_degree() < pa.total_degree() && divides_exactly(pb, pa)) return pb;

  int var = -1;
  for (int v = 0; v < nv; ++v) {
    if (pa.degree_in(v) > 0 && pb.degree_in(v) > 0) {
      var = v;
      break;
    }
  }
  if (var < 0) {
    // No shared variable: recurse through the content of one side, which
    // bottoms out at a constant once nothing is shared at any level.
    for (int v = 0; v < nv; ++v)
      if (pa.degree_in(v) > 0) return gcd(poly_content_in(pa, v), pb);
    return MPoly::constant(nv, Rat(1));
  }

  MPoly ca = poly_content_in(pa, var);
  MPoly cb = poly_content_in(pb, var);
  pa = pa.divide_exact(ca).primitive_part();
  pb = pb.divide_exact(cb).primitive_part();
  MPoly cont = gcd(ca, cb);

  // Primitive pseudo-remainder sequence; full content is stripped after
  // every step to keep coefficient growth in check.
  MPoly u = pa, v = pb;
  if (u.degree_in(var) < v.degree_in(var)) std::swap(u, v);
  while (!v.is_zero()) {
    MPoly r = prem(u, v, var);
    if (!r.is_zero()) {
      MPoly rc = poly_content_in(r, var);
      r = r.divide_exact(rc).primitive_part();
    }
    u = v;
    v = r;
  }
  MPoly g = u.primitive_part() * cont;
  if (sgn(g.leading_coefficient()) < 0) g = -g;
  return g;
}

MPoly lcm(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return MPoly(a.nvars());
  return a.divide_exact(gcd(a, b)) * b;
}

MPoly pochhammer(const MPoly& x, unsigned k) {
  MPoly r = MPoly::constant(x.nvars(), Rat(1));
  for (unsigned i = 0; i < k; ++i)
    r = r * (x + MPoly::constant(x.nvars(), Rat((long)i)));
  return r;
}

std::vector<long> integer_roots(const MPoly& p, int var) {
  std::vector<long> roots;
  if (p.is_zero() || p.is_constant()) return roots;
  // Clear to integer coefficients and strip powers of var.
  MPoly q = p * (Rat(1) / p.content());
  int low = q.low_degree_in(var);
  if (low > 0) {
    roots.push_back(0);
    q = q.divide_exact(MPoly::variable(q.nvars(), var, low));
  }
  if (q.is_constant()) return roots;
  Int c0 = q.coefficient_of(var, 0).constant_value().get_num();
  // Integer roots divide the constant term.
  std::vector<Int> divisors;
  Int ac0 = abs(c0);
  for (Int d = 1; d * d <= ac0; ++d) {
    if (ac0 % d == 0) {
      divisors.push_back(d);
      divisors.push_back(ac0 / d);
    }
  }
  for (const Int& d : divisors) {
    for (int s : {1, -1}) {
      Int cand = s * d;
      if (!cand.fits_slong_p()) continue;
      if (q.eval_var(var, Rat(cand)).is_zero()) {
        long r = cand.get_si();
        if (std::find(roots.begin(), roots.end(), r) == roots.end())
          roots.push_back(r);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace qfps
