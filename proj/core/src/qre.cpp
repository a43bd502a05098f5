#include "qfps/qre.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace qfps {

QRE qde_to_qre(const QDE& q) {
  const int np = (int)q.params.size();
  QRE r;
  r.params = q.params;
  std::map<int, MPoly> linear;                      // shift -> poly
  std::map<std::tuple<int, int, int>, MPoly> convs;  // (i,j,p) -> scale

  for (auto& [coeff, mono] : q.terms) {
    // Split the coefficient into c * z^p * (parameter monomial).
    for (auto& [m, c] : coeff.terms()) {
      int p = m.e[0];
      Monomial pm{std::vector<int>(1 + np, 0)};
      for (int v = 1; v <= np; ++v) pm.e[v] = m.e[v];
      MPoly scale(1 + np);
      scale.add_term(pm, c);
      if (mono.is_linear()) {
        // z^p y^(j) -> (n+1-p)_j a_{n+j-p}
        MPoly base = MPoly::variable(1 + np, 0) +
                     MPoly::constant(1 + np, Rat(1 - p));
        MPoly poly = scale * pochhammer(base, mono.a);
        int shift = mono.a - p;
        auto it = linear.find(shift);
        if (it == linear.end()) linear.emplace(shift, poly);
        else it->second += poly;
      } else {
        auto key = std::make_tuple(mono.a, mono.b, p);
        auto it = convs.find(key);
        if (it == convs.end()) convs.emplace(key, scale);
        else it->second += scale;
      }
    }
  }
  for (auto it = linear.rbegin(); it != linear.rend(); ++it)
    if (!it->second.is_zero()) r.linear.push_back({it->second, it->first});
  for (auto& [key, scale] : convs)
    if (!scale.is_zero())
      r.convs.push_back({scale, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  return r;
}

namespace {

Rat poch_rat(long x, int k) {
  Rat r(1);
  for (int t = 0; t < k; ++t) r *= Rat(x + t);
  return r;
}

struct Known {
  const std::vector<Rat>& prefix;
  // nullopt = uncovered
  std::optional<Rat> at(int idx) const {
    if (idx < 0) return Rat(0);
    if (idx < (int)prefix.size()) return prefix[idx];
    return std::nullopt;
  }
};

void require_param_free(const QRE& r) {
  if (!r.params.empty())
    throw InsufficientPrefix("evaluate_qre: parameterized recurrences need "
                             "specialized parameters");
}

}  // namespace

LocalEq evaluate_qre(const QRE& r, const std::vector<Rat>& prefix, int n) {
  require_param_free(r);
  Known known{prefix};

  int M = -1;
  for (auto& lt : r.linear) {
    if (is_zero(lt.poly.eval_var(0, Rat(n)).constant_value())) continue;
    M = std::max(M, n + lt.shift);
  }
  for (auto& cv : r.convs)
    if (n - cv.p >= 0) M = std::max(M, n - cv.p + std::max(cv.i, cv.j));

  LocalEq eq{Rat(0), Rat(0), Rat(0), M};
  if (M < 0) return eq;

  for (auto& lt : r.linear) {
    Rat w = lt.poly.eval_var(0, Rat(n)).constant_value();
    if (is_zero(w)) continue;
    int idx = n + lt.shift;
    if (idx == M) {
      eq.lin += w;
    } else {
      auto v = known.at(idx);
      if (!v) throw InsufficientPrefix("evaluate_qre: coefficient a_" +
                                       std::to_string(idx) + " not supplied");
      eq.cst += w * *v;
    }
  }
  for (auto& cv : r.convs) {
    Rat scale = cv.scale.constant_value();
    for (int k = 0; k <= n - cv.p; ++k) {
      int u = k + cv.i;
      int v = n - cv.p - k + cv.j;
      Rat w = scale * poch_rat(k + 1, cv.i) * poch_rat(n - cv.p - k + 1, cv.j);
      if (is_zero(w)) continue;
      bool uu = u == M, vu = v == M;
      if (uu && vu) {
        eq.quad += w;
      } else if (uu || vu) {
        auto other = known.at(uu ? v : u);
        if (!other)
          throw InsufficientPrefix("evaluate_qre: coefficient a_" +
                                   std::to_string(uu ? v : u) + " not supplied");
        eq.lin += w * *other;
      } else {
        auto a = known.at(u), b = known.at(v);
        if (a && is_zero(*a)) continue;
        if (b && is_zero(*b)) continue;
        if (!a || !b)
          throw InsufficientPrefix("evaluate_qre: coefficient a_" +
                                   std::to_string(!a ? u : v) + " not supplied");
        eq.cst += w * *a * *b;
      }
    }
  }
  return eq;
}

bool qre_holds_at(const QRE& r, const std::vector<Rat>& coeffs, int n) {
  require_param_free(r);
  Rat total(0);
  for (auto& lt : r.linear) {
    int idx = n + lt.shift;
    if (idx < 0) continue;
    assert(idx < (int)coeffs.size());
    total += lt.poly.eval_var(0, Rat(n)).constant_value() * coeffs[idx];
  }
  for (auto& cv : r.convs) {
    Rat scale = cv.scale.constant_value();
    for (int k = 0; k <= n - cv.p; ++k) {
      int u = k + cv.i, v = n - cv.p - k + cv.j;
      assert(u < (int)coeffs.size() && v < (int)coeffs.size());
      total += scale * poch_rat(k + 1, cv.i) * poch_rat(n - cv.p - k + 1, cv.j) *
               coeffs[u] * coeffs[v];
    }
  }
  return is_zero(total);
}

// ---------------------------------------------------------------------------
// Text rendering: paper-style sigma notation with expanded rising
// factorials, e.g. -2*sum(k=0..n, (k+1)*a[k+1]*a[n-k]).

namespace {

std::string index_string(const std::string& head, int c) {
  if (c == 0) return head;
  return head + (c > 0 ? "+" : "-") + std::to_string(std::abs(c));
}

// (base+1)(base+2)...(base+k) as printable factors; base is "k" or "n-k"-style.
std::string poch_factors(const std::string& head, int base_const, int k) {
  std::string out;
  for (int t = 1; t <= k; ++t) {
    out += "(" + index_string(head, base_const + t) + ")";
    if (t < k) out += "*";
  }
  return out;
}

// Factor a polynomial in n into integer-rooted linear factors when
// possible, e.g. (n+1)*(n+2); fall back to the expanded form.
std::string poly_factor_string(const MPoly& poly,
                               const std::vector<std::string>& names) {
  bool univariate = true;
  for (auto& [m, c] : poly.terms())
    for (size_t v = 1; v < m.e.size(); ++v)
      if (m.e[v]) univariate = false;
  if (!univariate || poly.is_constant() || poly.nvars() == 0)
    return "(" + poly.to_string(names) + ")";

  MPoly rest = poly;
  std::vector<long> roots;
  for (;;) {
    auto rs = integer_roots(rest, 0);
    if (rs.empty()) break;
    bool split = false;
    for (long r0 : rs) {
      MPoly lin = MPoly::variable(poly.nvars(), 0) -
                  MPoly::constant(poly.nvars(), Rat(r0));
      MPoly q;
      try {
        q = rest.divide_exact(lin);
      } catch (const std::domain_error&) {
        continue;
      }
      roots.push_back(r0);
      rest = q;
      split = true;
      break;
    }
    if (!split || rest.is_constant()) break;
  }
  std::sort(roots.begin(), roots.end(), std::greater<long>());
  std::string out;
  Rat lead = rest.is_constant() ? rest.constant_value() : Rat(1);
  if (rest.is_constant()) {
    if (lead == -1) out += "-";
    else if (lead != 1) out += to_string(lead) + "*";
  }
  for (size_t t = 0; t < roots.size(); ++t) {
    out += "(" + index_string("n", (int)-roots[t]) + ")";
    if (t + 1 < roots.size()) out += "*";
  }
  if (!rest.is_constant()) {
    if (!roots.empty()) out += "*";
    out += "(" + rest.to_string(names) + ")";
  }
  return out;
}

std::string scale_prefix(const MPoly& scale, const std::vector<std::string>& names,
                         bool& negative) {
  MPoly s = scale;
  negative = sgn(s.leading_coefficient()) < 0;
  if (negative) s = -s;
  if (s.is_constant() && s.constant_value() == 1) return "";
  if (s.terms().size() == 1) return s.to_string(names) + "*";
  return "(" + s.to_string(names) + ")*";
}

}  // namespace

std::string to_string(const QRE& r) {
  std::vector<std::string> names{"n"};
  for (auto& p : r.params) names.push_back(p);
  std::string K = "k";
  for (auto& p : r.params)
    if (p == "k") K = "_k";
  std::vector<std::pair<bool, std::string>> pieces;  // (negative, body)

  for (auto& lt : r.linear) {
    MPoly poly = lt.poly;
    bool neg = sgn(poly.leading_coefficient()) < 0;
    if (neg) poly = -poly;
    std::string body;
    if (poly.is_constant() && poly.constant_value() == 1)
      body = "a[" + index_string("n", lt.shift) + "]";
    else
      body = poly_factor_string(poly, names) + "*a[" + index_string("n", lt.shift) + "]";
    pieces.push_back({neg, body});
  }
  for (auto& cv : r.convs) {
    bool neg = false;
    std::string pre = scale_prefix(cv.scale, names, neg);
    std::string inner;
    std::string w1 = poch_factors(K, 0, cv.i);
    std::string w2 = poch_factors("n-" + K, -cv.p, cv.j);
    if (!w1.empty()) inner += w1 + "*";
    inner += "a[" + index_string(K, cv.i) + "]*";
    if (!w2.empty()) inner += w2 + "*";
    inner += "a[" + index_string("n-" + K, cv.j - cv.p) + "]";
    std::string body =
        pre + "sum(" + K + "=0.." + index_string("n", -cv.p) + ", " + inner + ")";
    pieces.push_back({neg, body});
  }

  std::string out;
  for (size_t t = 0; t < pieces.size(); ++t) {
    if (t == 0) out += pieces[t].first ? "-" : "";
    else out += pieces[t].first ? " - " : " + ";
    out += pieces[t].second;
  }
  return out + " = 0";
}

// ---------------------------------------------------------------------------
// Parsing of the printed form.

namespace {

struct QreParser {
  const std::string& text;
  const std::vector<std::string>& params;
  size_t pos = 0;
  std::string dummy = "k";

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("qre: expected '") + c + "'", pos);
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (text.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }

  // Linear index expressions in n and k, e.g. n-k+2, k+1, n.
  struct Index {
    int n = 0, k = 0, c = 0;
  };
  Index parse_index() {
    Index ix;
    int sign = 1;
    if (eat('-')) sign = -1;
    for (;;) {
      skip_ws();
      if (std::isdigit((unsigned char)peek())) {
        int v = 0;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
          v = v * 10 + (text[pos++] - '0');
        ix.c += sign * v;
      } else if (eat_word(dummy)) {
        ix.k += sign;
      } else if (eat_word("n")) {
        ix.n += sign;
      } else {
        throw ParseError("qre: bad index", pos);
      }
      if (eat('+')) sign = 1;
      else if (eat('-')) sign = -1;
      else return ix;
    }
  }

  // Polynomial in n, k and parameters built from parenthesized sums,
  // symbols and integers joined by '*' and '^'.
  MPoly parse_poly_factor(int nvars, const std::vector<std::string>& names) {
    skip_ws();
    MPoly acc{nvars};
    if (eat('(')) {
      acc = parse_poly_sum(nvars, names);
      expect(')');
    } else if (std::isdigit((unsigned char)peek())) {
      Int v = 0;
      while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
        v = v * 10 + (text[pos++] - '0');
      Rat r(v);
      if (eat('/')) {
        Int d = 0;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
          d = d * 10 + (text[pos++] - '0');
        r = make_rat(v, d);
      }
      acc = MPoly::constant(nvars, r);
    } else {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
        ++pos;
      std::string s = text.substr(start, pos - start);
      int idx = -1;
      for (size_t v = 0; v < names.size(); ++v)
        if (names[v] == s) idx = (int)v;
      if (idx < 0) throw ParseError("qre: unknown symbol " + s, start);
      acc = MPoly::variable(nvars, idx);
    }
    if (eat('^')) {
      int e = 0;
      skip_ws();
      while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
        e = e * 10 + (text[pos++] - '0');
      acc = acc.pow(e);
    }
    return acc;
  }

  MPoly parse_poly_product(int nvars, const std::vector<std::string>& names,
                           bool stop_at_a) {
    MPoly acc = MPoly::constant(nvars, Rat(1));
    for (;;) {
      skip_ws();
      if (stop_at_a && text.compare(pos, 2, "a[") == 0) return acc;
      acc = acc * parse_poly_factor(nvars, names);
      if (!eat('*')) return acc;
    }
  }

  MPoly parse_poly_sum(int nvars, const std::vector<std::string>& names) {
    MPoly acc(nvars);
    int sign = 1;
    if (eat('-')) sign = -1;
    for (;;) {
      MPoly t = parse_poly_product(nvars, names, false);
      acc += sign > 0 ? t : -t;
      if (eat('+')) sign = 1;
      else if (eat('-')) sign = -1;
      else return acc;
    }
  }
};

}  // namespace

QRE parse_qre(const std::string& text, const std::vector<std::string>& params) {
  const int np = (int)params.size();
  std::string dummy = "k";
  for (auto& p : params)
    if (p == "k") dummy = "_k";
  // Variables for parsing: n, dummy, params...; the dummy is dropped afterwards.
  std::vector<std::string> names{"n", dummy};
  for (auto& p : params) names.push_back(p);
  const int nv = 2 + np;

  QreParser P{text, params};
  P.dummy = dummy;
  QRE r;
  r.params = params;
  std::map<int, MPoly> linear;
  std::map<std::tuple<int, int, int>, MPoly> convs;

  auto strip_k = [&](const MPoly& p) {
    if (p.degree_in(1) > 0)
      throw ParseError("qre: stray summation dummy outside a sum", 0);
    MPoly out(1 + np);
    for (auto& [m, c] : p.terms()) {
      Monomial mm{std::vector<int>(1 + np, 0)};
      mm.e[0] = m.e[0];
      for (int v = 0; v < np; ++v) mm.e[1 + v] = m.e[2 + v];
      out.add_term(mm, c);
    }
    return out;
  };

  int sign = 1;
  if (P.eat('-')) sign = -1;
  for (;;) {
    P.skip_ws();
    // Leading scale and polynomial factors up to a[ or sum(.
    MPoly scale = MPoly::constant(nv, Rat(1));
    for (;;) {
      P.skip_ws();
      if (P.text.compare(P.pos, 2, "a[") == 0 ||
          P.text.compare(P.pos, 4, "sum(") == 0)
        break;
      scale = scale * P.parse_poly_factor(nv, names);
      P.eat('*');
    }
    if (P.eat_word("sum(")) {
      P.eat_word(P.dummy);
      P.expect('=');
      if (!P.eat('0')) throw ParseError("qre: sum must start at k=0", P.pos);
      P.eat_word("..");
      auto ub = P.parse_index();
      if (ub.n != 1 || ub.k != 0)
        throw ParseError("qre: sum upper bound must be n-p", P.pos);
      int p = -ub.c;
      P.expect(',');
      // Product of weight polynomials and two a[..] factors.
      MPoly weights = MPoly::constant(nv, Rat(1));
      std::vector<QreParser::Index> idxs;
      for (;;) {
        P.skip_ws();
        if (P.text.compare(P.pos, 2, "a[") == 0) {
          P.pos += 2;
          idxs.push_back(P.parse_index());
          P.expect(']');
        } else {
          weights = weights * P.parse_poly_factor(nv, names);
        }
        if (!P.eat('*')) break;
      }
      P.expect(')');
      if (idxs.size() != 2) throw ParseError("qre: sum needs two a factors", P.pos);
      // First factor a[k+i], second a[n-k+(j-p)].
      if (idxs[0].k != 1 || idxs[0].n != 0 || idxs[1].k != -1 || idxs[1].n != 1)
        throw ParseError("qre: sum factors must be a[k+i] and a[n-k+c]", P.pos);
      int i = idxs[0].c;
      int j = idxs[1].c + p;
      if (i < 0 || j < 0) throw ParseError("qre: negative derivative order", P.pos);
      // Validate weights == (k+1)_i (n-p-k+1)_j in (n, k).
      MPoly kvar = MPoly::variable(nv, 1), nvar = MPoly::variable(nv, 0);
      MPoly expect_w =
          pochhammer(kvar + MPoly::constant(nv, Rat(1)), i) *
          pochhammer(nvar - kvar + MPoly::constant(nv, Rat(1 - p)), j);
      if (!(weights == expect_w))
        throw ParseError("qre: sum weights are not the expected rising factorials",
                         P.pos);
      MPoly sc = strip_k(scale) * Rat(sign);
      auto key = std::make_tuple(i, j, p);
      auto it = convs.find(key);
      if (it == convs.end()) convs.emplace(key, sc);
      else it->second += sc;
    } else if (P.text.compare(P.pos, 2, "a[") == 0) {
      P.pos += 2;
      auto ix = P.parse_index();
      P.expect(']');
      if (ix.n != 1 || ix.k != 0)
        throw ParseError("qre: linear index must be n+shift", P.pos);
      MPoly poly = strip_k(scale) * Rat(sign);
      auto it = linear.find(ix.c);
      if (it == linear.end()) linear.emplace(ix.c, poly);
      else it->second += poly;
    } else {
      throw ParseError("qre: expected a[..] or sum(..)", P.pos);
    }

    if (P.eat('+')) sign = 1;
    else if (P.eat('-')) sign = -1;
    else break;
  }
  if (P.eat('=')) {
    if (!P.eat('0')) throw ParseError("qre: right-hand side must be 0", P.pos);
  }
  P.skip_ws();
  if (P.pos != P.text.size()) throw ParseError("qre: trailing input", P.pos);

  for (auto it = linear.rbegin(); it != linear.rend(); ++it)
    if (!it->second.is_zero()) r.linear.push_back({it->second, it->first});
  for (auto& [key, scale] : convs)
    if (!scale.is_zero())
      r.convs.push_back({scale, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  return r;
}

}  // namespace qfps
