#include "qfps/qde.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>

#include "qfps/linear.hpp"

namespace qfps {

std::pair<int, int> index_pair(int k) {
  if (k <= 0) throw std::domain_error("index_pair: k must be positive");
  // l = floor(sqrt(2k + 1/4) - 1/2) = floor((isqrt(8k+1) - 1) / 2)
  Int disc = 8 * Int(k) + 1;
  Int s;
  mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
  long l = Int((s - 1) / 2).get_si();
  long N = l * (l + 1) / 2;
  if (N == k) return {(int)l, (int)l};
  return {(int)l + 1, (int)(k - N)};
}

int scheme_index(int i, int j) {
  assert(i >= j && j >= 1);
  return i * (i - 1) / 2 + j;
}

Expr delta2(const Expr& f, int k) {
  auto [i, j] = index_pair(k);
  Expr left = i - 2 < 0 ? Expr::integer(1) : differentiate(f, i - 2);
  Expr right = j - 2 < 0 ? Expr::integer(1) : differentiate(f, j - 2);
  return Expr::product({left, right});
}

int QDE::order() const {
  int d = 0;
  for (auto& [c, m] : terms) d = std::max(d, m.a);
  return d;
}

int QDE::leading_index() const {
  int idx = 0;
  for (auto& [c, m] : terms)
    idx = std::max(idx, scheme_index(m.a + 2, m.b + 2));
  return idx;
}

bool QDE::is_linear_ode() const {
  for (auto& [c, m] : terms)
    if (!m.is_linear()) return false;
  return true;
}

namespace {

CanonicalForm delta2_cf_at(const std::vector<CanonicalForm>& derivs, int k) {
  auto [i, j] = index_pair(k);
  const Tower* t = derivs[0].tower();
  CanonicalForm left = i - 2 < 0 ? t->constant(Rat(1)) : derivs[i - 2];
  CanonicalForm right = j - 2 < 0 ? t->constant(Rat(1)) : derivs[j - 2];
  return left * right;
}

// Clear denominators and content from the solved coefficient vector and
// fix the sign so the leading polynomial's leading coefficient is positive.
std::vector<MPoly> clear_coefficients(const std::vector<RatFunc>& cs) {
  assert(!cs.empty());
  const int nv = cs[0].nvars();
  MPoly common = MPoly::constant(nv, Rat(1));
  for (auto& c : cs) common = lcm(common, c.den());
  std::vector<MPoly> polys;
  polys.reserve(cs.size());
  for (auto& c : cs) polys.push_back(c.num() * common.divide_exact(c.den()));

  MPoly g(nv);
  for (auto& p : polys) g = gcd(g, p);
  Rat content(0);
  for (auto& p : polys) {
    if (p.is_zero()) continue;
    Rat c = p.content();
    content = qfps::is_zero(content)
                  ? c
                  : make_rat(gcd(content.get_num() * c.get_den(),
                                 c.get_num() * content.get_den()),
                             content.get_den() * c.get_den());
  }
  for (auto& p : polys) {
    if (!g.is_constant()) p = p.divide_exact(g);
    p = p * (Rat(1) / content);
  }
  // Leading term is the last entry (the normalized ansatz head).
  if (sgn(polys.back().leading_coefficient()) < 0)
    for (auto& p : polys) p = -p;
  return polys;
}

}  // namespace

std::optional<QDE> try_leading_index(Tower& tower,
                                     const std::vector<CanonicalForm>& delta2_cf,
                                     int leading,
                                     const std::vector<std::string>& params) {
  // Ansatz: delta2^leading f + C_{N-1} delta2^{leading-1} f + ... + C_0 f,
  // indices 2..leading, N = leading - 2 unknowns.
  const int n_unknowns = leading - 2;
  const int nv_full = tower.nvars();
  const int np = tower.nparams();

  // Common denominator over the tower variables.
  MPoly common = MPoly::constant(nv_full, Rat(1));
  for (int k = 2; k <= leading; ++k)
    common = lcm(common, delta2_cf[k].ratfunc().den().extended(nv_full));

  // Row map: kernel monomial -> coefficients (per ansatz slot, z/params only).
  struct Row {
    std::vector<MPoly> cols;
    MPoly rhs;
  };
  std::map<std::vector<int>, Row> rows;
  auto project = [&](const MPoly& p) {
    // Entries must live in K(z); kernel-variable support goes to the key.
    MPoly out(1 + np);
    for (auto& [m, c] : p.terms()) {
      Monomial proj{std::vector<int>(1 + np, 0)};
      for (int v = 0; v <= np; ++v) proj.e[v] = m.e[v];
      out.add_term(proj, c);
    }
    return out;
  };
  for (int k = 2; k <= leading; ++k) {
    const RatFunc& f = delta2_cf[k].ratfunc();
    MPoly contrib =
        f.num().extended(nv_full) * common.divide_exact(f.den().extended(nv_full));
    // Split by kernel monomial.
    std::map<std::vector<int>, MPoly> split;
    for (auto& [m, c] : contrib.terms()) {
      std::vector<int> key(tower.nkernels(), 0);
      for (int kk = 0; kk < tower.nkernels(); ++kk)
        key[kk] = m.e[tower.kernel_var(kk)];
      auto it = split.find(key);
      if (it == split.end()) it = split.emplace(key, MPoly(nv_full)).first;
      MPoly t(nv_full);
      t.add_term(m, c);
      it->second += t;
    }
    for (auto& [key, poly] : split) {
      auto it = rows.find(key);
      if (it == rows.end())
        it = rows.emplace(key, Row{std::vector<MPoly>(n_unknowns, MPoly(1 + np)),
                                   MPoly(1 + np)}).first;
      MPoly pr = project(poly);
      if (k == leading) it->second.rhs -= pr;  // moved to the right-hand side
      else it->second.cols[k - 2] += pr;
    }
  }

  std::vector<std::vector<RatFunc>> A;
  std::vector<RatFunc> b;
  for (auto& [key, row] : rows) {
    std::vector<RatFunc> r;
    r.reserve(n_unknowns);
    for (auto& p : row.cols) r.push_back(RatFunc::from_poly(p));
    A.push_back(std::move(r));
    b.push_back(RatFunc::from_poly(row.rhs));
  }

  auto sol = solve_linear(A, b);
  if (!sol) return std::nullopt;

  std::vector<RatFunc> coeffs = *sol;
  coeffs.push_back(RatFunc::constant(1 + np, Rat(1)));  // leading slot
  std::vector<MPoly> cleared = clear_coefficients(coeffs);

  QDE q;
  q.params = params;
  for (int k = 2; k <= leading; ++k) {
    const MPoly& c = cleared[k - 2];
    if (c.is_zero()) continue;
    auto [i, j] = index_pair(k);
    q.terms.push_back({c, DiffMono{i - 2, j - 2}});
  }
  return q;
}

QDE find_qde(const Expr& f, const FindOptions& opt) {
  if (opt.max_index < 3)
    throw std::domain_error("find_qde: max_index must be at least 3");
  Tower tower(opt.params, opt.depth_limit);
  CanonicalForm f_cf = tower.canonicalize(f);

  if (f_cf.is_zero()) {
    // Trivial zero equivalence: the order-0 equation y = 0.
    QDE q;
    q.params = opt.params;
    q.terms.push_back({MPoly::constant(1 + (int)opt.params.size(), Rat(1)),
                       DiffMono{0, -1}});
    return q;
  }

  // Derivatives once, up to the order reachable within max_index.
  int max_order = index_pair(opt.max_index).first - 2;
  std::vector<CanonicalForm> derivs{f_cf};
  for (int i = 0; i < max_order; ++i) derivs.push_back(derivs.back().derivative());

  std::vector<CanonicalForm> d2(opt.max_index + 1, CanonicalForm());
  for (int k = 2; k <= opt.max_index; ++k) d2[k] = delta2_cf_at(derivs, k);

  for (int leading = 3; leading <= opt.max_index; ++leading) {
    auto q = try_leading_index(tower, d2, leading, opt.params);
    if (!q) continue;
    // Mandatory post-check: resubstitute and demand exact vanishing.
    CanonicalForm acc = tower.constant(Rat(0));
    for (auto& [c, m] : q->terms) {
      CanonicalForm mono = m.b < 0 ? tower.constant(Rat(1)) : derivs[m.b];
      mono = mono * derivs[m.a];
      RatFunc cf(c.extended(tower.nvars()),
                 MPoly::constant(tower.nvars(), Rat(1)), false);
      acc = acc + CanonicalForm(&tower, tower.reduce(cf)) * mono;
    }
    if (!acc.is_zero())
      throw QdeSearchError("find_qde: internal verification failed");
    return *q;
  }
  throw QdeSearchError(
      "find_qde: not detected quadratic-differentially finite within index bound " +
      std::to_string(opt.max_index));
}

bool verify_qde(const Expr& f, const QDE& q) {
  Tower tower(q.params);
  CanonicalForm fc = tower.canonicalize(f);
  int max_order = 0;
  for (auto& [c, m] : q.terms) max_order = std::max(max_order, m.a);
  std::vector<CanonicalForm> derivs{fc};
  for (int i = 0; i < max_order; ++i) derivs.push_back(derivs.back().derivative());
  CanonicalForm acc = tower.constant(Rat(0));
  for (auto& [c, m] : q.terms) {
    CanonicalForm mono = m.b < 0 ? tower.constant(Rat(1)) : derivs[m.b];
    mono = mono * derivs[m.a];
    RatFunc cf(c.extended(tower.nvars()), MPoly::constant(tower.nvars(), Rat(1)),
               false);
    acc = acc + CanonicalForm(&tower, tower.reduce(cf)) * mono;
  }
  return acc.is_zero();
}

// ---------------------------------------------------------------------------
// Text rendering and parsing. Monomials print as y, y', y''..., with
// products like y''*y and squares like y'^2.

namespace {

std::string mono_string(const DiffMono& m) {
  auto yk = [](int order) {
    std::string s = "y";
    for (int i = 0; i < order; ++i) s += "'";
    return s;
  };
  if (m.is_linear()) return yk(m.a);
  if (m.a == m.b) return yk(m.a) + "^2";
  return yk(m.a) + "*" + yk(m.b);
}

}  // namespace

std::string to_string(const QDE& q) {
  std::vector<std::string> names{"z"};
  for (auto& p : q.params) names.push_back(p);
  std::string out;
  for (size_t t = 0; t < q.terms.size(); ++t) {
    const auto& [c, m] = q.terms[t];
    bool neg = sgn(c.leading_coefficient()) < 0;
    MPoly shown = neg ? -c : c;
    std::string cs = shown.to_string(names);
    std::string piece;
    if (cs == "1") piece = mono_string(m);
    else if (shown.terms().size() > 1) piece = "(" + cs + ")*" + mono_string(m);
    else piece = cs + "*" + mono_string(m);
    if (t == 0) out += neg ? "-" + piece : piece;
    else out += (neg ? " - " : " + ") + piece;
  }
  return out + " = 0";
}

QDE parse_qde(const std::string& text, const std::vector<std::string>& params) {
  // y, y', y''... are read as opaque symbols; the expression parser does
  // the rest and the result is expanded into monomials.
  std::string body = text;
  auto eq = body.find('=');
  if (eq != std::string::npos) {
    std::string rhs = body.substr(eq + 1);
    for (char ch : rhs)
      if (!std::isspace((unsigned char)ch) && ch != '0')
        throw ParseError("qde: right-hand side must be 0", eq);
    body = body.substr(0, eq);
  }
  const int max_primes = 8;
  std::string t;
  for (size_t i = 0; i < body.size();) {
    if (body[i] == 'y') {
      size_t j = i + 1;
      int primes = 0;
      while (j < body.size() && body[j] == '\'') ++j, ++primes;
      if (primes > max_primes) throw ParseError("qde: derivative order too large", i);
      t += "yd" + std::to_string(primes);
      i = j;
    } else {
      t += body[i++];
    }
  }
  std::set<std::string> syms(params.begin(), params.end());
  for (int i = 0; i <= max_primes; ++i) syms.insert("yd" + std::to_string(i));
  Expr e = parse(t, syms);

  // Expand into monomials over {z, params, yd*}.
  struct Term {
    Rat coef;
    std::map<std::string, int> pows;
  };
  std::function<std::vector<Term>(const Expr&)> expand =
      [&](const Expr& node) -> std::vector<Term> {
    switch (node.kind()) {
      case ExprKind::Number:
        return {{node.number_value(), {}}};
      case ExprKind::Z:
        return {{Rat(1), {{"z", 1}}}};
      case ExprKind::Param:
        return {{Rat(1), {{node.param_name(), 1}}}};
      case ExprKind::Sum: {
        std::vector<Term> out;
        for (auto& u : node.operands())
          for (auto& term : expand(u)) out.push_back(term);
        return out;
      }
      case ExprKind::Product: {
        std::vector<Term> out{{Rat(1), {}}};
        for (auto& u : node.operands()) {
          std::vector<Term> rhs = expand(u);
          std::vector<Term> next;
          for (auto& a : out)
            for (auto& b : rhs) {
              Term c{a.coef * b.coef, a.pows};
              for (auto& [k2, v2] : b.pows) c.pows[k2] += v2;
              next.push_back(std::move(c));
            }
          out = std::move(next);
        }
        return out;
      }
      case ExprKind::Power: {
        auto n = node.exponent().as_long();
        if (!n || *n < 0) throw ParseError("qde: unsupported exponent", 0);
        std::vector<Term> out{{Rat(1), {}}};
        std::vector<Term> base = expand(node.base());
        for (long i = 0; i < *n; ++i) {
          std::vector<Term> next;
          for (auto& a : out)
            for (auto& b : base) {
              Term c{a.coef * b.coef, a.pows};
              for (auto& [k2, v2] : b.pows) c.pows[k2] += v2;
              next.push_back(std::move(c));
            }
          out = std::move(next);
        }
        return out;
      }
      default:
        throw ParseError("qde: unsupported syntax", 0);
    }
  };

  const int np = (int)params.size();
  std::map<DiffMono, MPoly> acc;
  for (auto& term : expand(e)) {
    std::vector<int> orders;
    Monomial mono{std::vector<int>(1 + np, 0)};
    for (auto& [name, e2] : term.pows) {
      if (e2 == 0) continue;
      if (name.rfind("yd", 0) == 0) {
        int ord = std::stoi(name.substr(2));
        for (int r = 0; r < e2; ++r) orders.push_back(ord);
      } else if (name == "z") {
        mono.e[0] += e2;
      } else {
        bool found = false;
        for (int i = 0; i < np; ++i)
          if (params[i] == name) { mono.e[1 + i] += e2; found = true; }
        if (!found) throw ParseError("qde: unknown symbol " + name, 0);
      }
    }
    if (orders.empty() || orders.size() > 2)
      throw ParseError("qde: each term needs one or two y factors", 0);
    DiffMono dm;
    if (orders.size() == 1) dm = DiffMono{orders[0], -1};
    else {
      std::sort(orders.begin(), orders.end());
      dm = DiffMono{orders[1], orders[0]};
    }
    auto it = acc.find(dm);
    if (it == acc.end()) it = acc.emplace(dm, MPoly(1 + np)).first;
    it->second.add_term(mono, term.coef);
  }

  QDE q;
  q.params = params;
  for (auto& [dm, poly] : acc)
    if (!poly.is_zero()) q.terms.push_back({poly, dm});
  std::sort(q.terms.begin(), q.terms.end(),
            [](auto& x, auto& y) { return x.second < y.second; });
  return q;
}

}  // namespace qfps
