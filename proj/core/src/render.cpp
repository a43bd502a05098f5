#include "qfps/render.hpp"

#include <json.hpp>

namespace qfps {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Text for truncated series.

std::string to_string(const TruncSeries& s) {
  std::string out;
  bool first = true;
  for (int x = s.valid - 1; x >= s.off; --x) {
    Rat c = s.coeff(x);
    if (is_zero(c)) continue;
    bool neg = sgn(c) < 0;
    Rat a = abs(c);
    std::string body;
    if (x == 0) {
      body = to_string(a);
    } else {
      std::string zp = x == 1 ? "z" : (x < 0 ? "z^(" + std::to_string(x) + ")"
                                              : "z^" + std::to_string(x));
      body = a == 1 ? zp : to_string(a) + "*" + zp;
    }
    if (first) out += (neg ? "-" : "") + body;
    else out += (neg ? " - " : " + ") + body;
    first = false;
  }
  if (first) out = "0";
  return out;
}

// ---------------------------------------------------------------------------
// JSON.

namespace {

json poly_json(const MPoly& p, const std::vector<std::string>& names) {
  json monos = json::array();
  for (auto& [m, c] : p.terms()) {
    json mono;
    mono["coef"] = to_string(c);
    json exps = json::object();
    for (size_t v = 0; v < m.e.size(); ++v)
      if (m.e[v] != 0) exps[names[v]] = m.e[v];
    mono["exponents"] = exps;
    monos.push_back(mono);
  }
  return monos;
}

// Univariate polynomial in n as ascending coefficient strings.
json coeff_list_json(const MPoly& p) {
  json out = json::array();
  int d = p.degree_in(0);
  for (int k = 0; k <= std::max(d, 0); ++k) {
    MPoly c = p.coefficient_of(0, k);
    out.push_back(to_string(c.is_zero() ? Rat(0) : c.constant_value()));
  }
  return out;
}

std::vector<std::string> qde_names(const QDE& q) {
  std::vector<std::string> names{"z"};
  for (auto& p : q.params) names.push_back(p);
  return names;
}

json qde_json(const QDE& q) {
  json j;
  j["params"] = q.params;
  json terms = json::array();
  for (auto& [c, m] : q.terms) {
    json t;
    t["coefficient"] = c.to_string(qde_names(q));
    t["monomials"] = poly_json(c, qde_names(q));
    t["orders"] = m.is_linear() ? json::array({m.a}) : json::array({m.a, m.b});
    terms.push_back(t);
  }
  j["terms"] = terms;
  j["order"] = q.order();
  j["leading_index"] = q.leading_index();
  j["text"] = to_string(q);
  return j;
}

json qre_json(const QRE& r) {
  std::vector<std::string> names{"n"};
  for (auto& p : r.params) names.push_back(p);
  json j;
  j["params"] = r.params;
  json lin = json::array();
  for (auto& lt : r.linear) {
    json t;
    t["poly"] = lt.poly.to_string(names);
    t["shift"] = lt.shift;
    lin.push_back(t);
  }
  j["linear_terms"] = lin;
  json convs = json::array();
  for (auto& cv : r.convs) {
    json t;
    t["scale"] = cv.scale.to_string(names);
    t["i"] = cv.i;
    t["j"] = cv.j;
    t["p"] = cv.p;
    convs.push_back(t);
  }
  j["convolution_terms"] = convs;
  j["text"] = to_string(r);
  return j;
}

json rep_json(const SeriesRep& rep) {
  json j;
  j["expr"] = rep.input.to_string();
  j["shift"] = rep.shift;
  j["proven_zero"] = rep.proven_zero;
  j["implicit"] = rep.implicit;
  json rec;
  if (rep.implicit) {
    rec = qre_json(rep.qre);
  } else if (!rep.proven_zero || !rep.ivals.empty() || !rep.rec.denom.is_zero()) {
    rec["lhs_index_offset"] = rep.rec.lhs_offset;
    rec["denominator_poly"] = coeff_list_json(rep.rec.denom);
    json lin = json::array();
    for (auto& lt : rep.rec.lin) {
      json t;
      t["poly"] = coeff_list_json(lt.poly);
      t["shift"] = lt.shift;
      lin.push_back(t);
    }
    rec["linear_terms"] = lin;
    json convs = json::array();
    for (auto& cv : rep.rec.convs) {
      json t;
      t["scale"] = to_string(cv.scale.is_zero() ? Rat(0) : cv.scale.constant_value());
      t["i"] = cv.i;
      t["j"] = cv.j;
      t["p"] = cv.p;
      convs.push_back(t);
    }
    rec["convolution_terms"] = convs;
  }
  j["recurrence"] = rec;
  json iv = json::array();
  for (auto& v : rep.ivals) iv.push_back(to_string(v));
  j["initial_values"] = iv;
  j["valid_from"] = rep.rec.valid_from;
  if (!rep.oracle_resolved.empty()) j["oracle_resolved"] = rep.oracle_resolved;
  j["text"] = to_string(rep);
  return j;
}

json series_json(const TruncSeries& s) {
  json j;
  j["offset"] = s.off;
  j["order"] = s.valid - 1;
  json cs = json::array();
  for (int x = s.off; x < s.valid; ++x) cs.push_back(to_string(s.coeff(x)));
  j["coefficients"] = cs;
  j["text"] = to_string(s);
  return j;
}

}  // namespace

std::string to_json(const QDE& q) { return qde_json(q).dump(2); }
std::string to_json(const QRE& r) { return qre_json(r).dump(2); }
std::string to_json(const SeriesRep& rep) { return rep_json(rep).dump(2); }
std::string to_json(const TruncSeries& s) { return series_json(s).dump(2); }

std::string to_json(const Verdict& v) {
  json j;
  switch (v.kind) {
    case Verdict::Kind::Equal: j["verdict"] = "equal"; break;
    case Verdict::Kind::NotEqual: j["verdict"] = "not-equal"; break;
    case Verdict::Kind::Undecided: j["verdict"] = "undecided"; break;
  }
  j["reason"] = v.reason;
  if (v.kind == Verdict::Kind::NotEqual) {
    j["witness"] = {{"exponent", v.witness_exponent},
                    {"lhs", to_string(v.lhs_coeff)},
                    {"rhs", to_string(v.rhs_coeff)}};
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// LaTeX.

namespace {

std::string latex_poly(const MPoly& p, const std::vector<std::string>& names) {
  std::string s = p.to_string(names);
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '*') out += "\\,";
    else out += s[i];
  }
  return out;
}

std::string latex_y(int order) {
  if (order == 0) return "y";
  if (order <= 3) return "y" + std::string(order, '\'');
  return "y^{(" + std::to_string(order) + ")}";
}

std::string latex_index(const std::string& head, int c) {
  if (c == 0) return head;
  return head + (c > 0 ? "+" : "-") + std::to_string(std::abs(c));
}

}  // namespace

std::string to_latex(const QDE& q) {
  std::vector<std::string> names{"z"};
  for (auto& p : q.params) names.push_back(p);
  std::string out;
  for (size_t t = 0; t < q.terms.size(); ++t) {
    auto& [c, m] = q.terms[t];
    bool neg = sgn(c.leading_coefficient()) < 0;
    MPoly shown = neg ? -c : c;
    std::string cs;
    if (!(shown.is_constant() && shown.constant_value() == 1)) {
      cs = shown.terms().size() > 1 ? "\\left(" + latex_poly(shown, names) + "\\right)"
                                    : latex_poly(shown, names);
      cs += "\\,";
    }
    std::string mono = m.is_linear()
                           ? latex_y(m.a)
                           : (m.a == m.b ? "\\left(" + latex_y(m.a) + "\\right)^2"
                                         : latex_y(m.a) + "\\," + latex_y(m.b));
    if (t == 0) out += (neg ? "-" : "") + cs + mono;
    else out += (neg ? " - " : " + ") + cs + mono;
  }
  return out + " = 0";
}

std::string to_latex(const QRE& r) {
  std::vector<std::string> names{"n"};
  for (auto& p : r.params) names.push_back(p);
  std::string out;
  bool first = true;
  auto add = [&](bool neg, const std::string& body) {
    if (first) out += (neg ? "-" : "") + body;
    else out += (neg ? " - " : " + ") + body;
    first = false;
  };
  for (auto& lt : r.linear) {
    MPoly poly = lt.poly;
    bool neg = sgn(poly.leading_coefficient()) < 0;
    if (neg) poly = -poly;
    std::string cs;
    if (!(poly.is_constant() && poly.constant_value() == 1))
      cs = "\\left(" + latex_poly(poly, names) + "\\right)";
    add(neg, cs + "a_{" + latex_index("n", lt.shift) + "}");
  }
  for (auto& cv : r.convs) {
    MPoly sc = cv.scale;
    bool neg = sgn(sc.leading_coefficient()) < 0;
    if (neg) sc = -sc;
    std::string pre;
    if (!(sc.is_constant() && sc.constant_value() == 1))
      pre = latex_poly(sc, names) + "\\,";
    std::string inner;
    for (int t = 1; t <= cv.i; ++t) inner += "(" + latex_index("k", t) + ")";
    inner += "\\,a_{" + latex_index("k", cv.i) + "}";
    for (int t = 1; t <= cv.j; ++t)
      inner += "(" + latex_index("n-k", t - cv.p) + ")";
    inner += "\\,a_{" + latex_index("n-k", cv.j - cv.p) + "}";
    add(neg, pre + "\\sum_{k=0}^{" + latex_index("n", -cv.p) + "} " + inner);
  }
  return out + " = 0";
}

std::string to_latex(const SeriesRep& rep) {
  std::string out = "\\begin{aligned}";
  std::string zpow =
      rep.shift == 0 ? "z^{n}" : "z^{n" + std::string(rep.shift > 0 ? "+" : "") +
                                     std::to_string(rep.shift) + "}";
  out += "&\\textstyle\\sum_{n\\ge 0} A(n)\\," + zpow + "\\\\";
  if (rep.proven_zero) {
    out += "&A(n) = 0";
    return out + "\\end{aligned}";
  }
  std::vector<std::string> names{"n"};
  if (rep.implicit) {
    out += "&" + to_latex(rep.qre);
  } else {
    const SolvedRecurrence& rec = rep.rec;
    int n0 = rec.valid_from, m = n0 + rec.lhs_offset;
    std::string rhs;
    bool first = true;
    auto add = [&](bool neg, const std::string& body) {
      if (first) rhs += (neg ? "-" : "") + body;
      else rhs += (neg ? " - " : " + ") + body;
      first = false;
    };
    for (auto& lt : rec.lin) {
      MPoly poly = lt.poly.subst_var(
          0, MPoly::variable(1, 0) + MPoly::constant(1, Rat(n0)));
      bool neg = sgn(poly.leading_coefficient()) < 0;
      if (neg) poly = -poly;
      std::string cs;
      if (!(poly.is_constant() && poly.constant_value() == 1))
        cs = "\\left(" + latex_poly(poly, names) + "\\right)";
      add(neg, cs + "A(" + latex_index("n", n0 + lt.shift) + ")");
    }
    for (auto& cv : rec.convs) {
      Rat sc = cv.scale.constant_value();
      bool neg = sgn(sc) < 0;
      Rat a = abs(sc);
      std::string pre = a == 1 ? "" : to_string(a) + "\\,";
      std::string inner;
      for (int t = 1; t <= cv.i; ++t) inner += "(" + latex_index("k", t) + ")";
      inner += "\\,A(" + latex_index("k", cv.i) + ")";
      for (int t = 1; t <= cv.j; ++t)
        inner += "(" + latex_index("n-k", n0 - cv.p + t) + ")";
      inner += "\\,A(" + latex_index("n-k", n0 - cv.p + cv.j) + ")";
      add(neg, pre + "\\sum_{k=1}^{" + latex_index("n", n0 - cv.p - 1) + "} " + inner);
    }
    if (first) rhs = "0";
    MPoly D = rec.denom.subst_var(
        0, MPoly::variable(1, 0) + MPoly::constant(1, Rat(n0)));
    out += "&A(" + latex_index("n", m) + ") = -\\frac{" + rhs + "}{" +
           latex_poly(D, names) + "}\\quad (n\\ge 0)\\\\";
  }
  out += "&";
  for (size_t i = 0; i < rep.ivals.size(); ++i) {
    out += "A(" + std::to_string(i) + ") = " + to_string(rep.ivals[i]);
    if (i + 1 < rep.ivals.size()) out += ",\\ ";
  }
  return out + "\\end{aligned}";
}

std::string to_latex(const TruncSeries& s) {
  std::string t = to_string(s);
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '*') out += "\\,";
    else out += t[i];
  }
  return out;
}

std::string to_latex(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Equal: return "\\text{equal}";
    case Verdict::Kind::NotEqual:
      return "\\text{not equal at } z^{" + std::to_string(v.witness_exponent) + "}";
    default: return "\\text{undecided}";
  }
}

}  // namespace qfps
