#include "qfps/expr.hpp"

#include <cassert>
#include <cctype>
#include <functional>

namespace qfps {

namespace {
const char* kFuncNames[] = {
    "exp", "log", "sin", "cos", "tan", "sec", "csc", "cot",
    "sinh", "cosh", "tanh", "arcsin", "arctan", "arcsinh", "arctanh", "sqrt",
};
constexpr int kFuncCount = 16;

size_t hash_combine(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

size_t hash_rat(const Rat& r) {
  return hash_combine(std::hash<std::string>()(r.get_str()), 7);
}
}  // namespace

const char* func_name(Func f) { return kFuncNames[(int)f]; }

std::optional<Func> func_by_name(const std::string& name) {
  for (int i = 0; i < kFuncCount; ++i)
    if (name == kFuncNames[i]) return (Func)i;
  return std::nullopt;
}

Exponent Exponent::operator*(const Rat& s) const {
  if (qfps::is_zero(s)) return Exponent::constant(Rat(0));
  return {coef * s, qfps::is_zero(coef * s) ? "" : param, cnst * s};
}

Exponent Exponent::operator+(const Exponent& o) const {
  if (!is_constant() && !o.is_constant() && param != o.param)
    throw std::domain_error("exponent: two distinct parameters");
  Exponent r;
  r.coef = coef + o.coef;
  r.param = is_constant() ? o.param : param;
  if (qfps::is_zero(r.coef)) r.param.clear();
  r.cnst = cnst + o.cnst;
  return r;
}

bool Exponent::operator==(const Exponent& o) const {
  if (is_constant() != o.is_constant()) return false;
  if (is_constant()) return cnst == o.cnst;
  return coef == o.coef && param == o.param && cnst == o.cnst;
}

std::shared_ptr<const ExprNode> Expr::zero_node() {
  static const std::shared_ptr<const ExprNode> zero = [] {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = Rat(0);
    n->hash = hash_rat(n->number);
    return n;
  }();
  return zero;
}

Expr Expr::make(ExprNode&& n) {
  size_t h = (size_t)n.kind * 0x9e3779b97f4a7c15ULL;
  switch (n.kind) {
    case ExprKind::Number: h = hash_combine(h, hash_rat(n.number)); break;
    case ExprKind::Z: break;
    case ExprKind::Param: h = hash_combine(h, std::hash<std::string>()(n.name)); break;
    case ExprKind::Sum:
    case ExprKind::Product:
      for (auto& t : n.operands) h = hash_combine(h, t.hash());
      break;
    case ExprKind::Power:
      h = hash_combine(h, n.operands[0].hash());
      h = hash_combine(h, hash_rat(n.exponent.coef));
      h = hash_combine(h, std::hash<std::string>()(n.exponent.param));
      h = hash_combine(h, hash_rat(n.exponent.cnst));
      break;
    case ExprKind::App:
      h = hash_combine(h, (size_t)n.func);
      h = hash_combine(h, n.operands[0].hash());
      break;
  }
  n.hash = h;
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::number(const Rat& r) {
  ExprNode n;
  n.kind = ExprKind::Number;
  n.number = r;
  return make(std::move(n));
}

Expr Expr::z() {
  ExprNode n;
  n.kind = ExprKind::Z;
  return make(std::move(n));
}

Expr Expr::param(const std::string& name) {
  ExprNode n;
  n.kind = ExprKind::Param;
  n.name = name;
  return make(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rat cst(0);
  for (auto& t : terms) {
    if (t.kind() == ExprKind::Sum) {
      for (auto& u : t.operands()) {
        if (u.is_number()) cst += u.number_value();
        else flat.push_back(u);
      }
    } else if (t.is_number()) {
      cst += t.number_value();
    } else {
      flat.push_back(t);
    }
  }
  if (!qfps::is_zero(cst)) flat.push_back(number(cst));
  if (flat.empty()) return number(Rat(0));
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = ExprKind::Sum;
  n.operands = std::move(flat);
  return make(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rat cst(1);
  for (auto& f : factors) {
    if (f.kind() == ExprKind::Product) {
      for (auto& u : f.operands()) {
        if (u.is_number()) cst *= u.number_value();
        else flat.push_back(u);
      }
    } else if (f.is_number()) {
      cst *= f.number_value();
    } else {
      flat.push_back(f);
    }
  }
  if (qfps::is_zero(cst)) return number(Rat(0));
  if (cst != 1) flat.insert(flat.begin(), number(cst));
  if (flat.empty()) return number(Rat(1));
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = ExprKind::Product;
  n.operands = std::move(flat);
  return make(std::move(n));
}

Expr Expr::power(const Expr& base, const Exponent& e) {
  if (e.is_constant() && qfps::is_zero(e.cnst)) return number(Rat(1));
  if (e.is_constant() && e.cnst == 1) return base;
  if (base.is_number() && e.is_integer()) {
    auto v = e.as_long();
    if (v && !base.is_zero()) return number(rat_pow(base.number_value(), *v));
    if (base.is_one()) return base;
  }
  if (base.kind() == ExprKind::Power) {
    // (b^e1)^e2 combines when the product of exponents stays linear.
    const Exponent& e1 = base.exponent();
    if (e1.is_constant()) return power(base.base(), e * e1.cnst);
    if (e.is_constant()) return power(base.base(), e1 * e.cnst);
  }
  ExprNode n;
  n.kind = ExprKind::Power;
  n.operands = {base};
  n.exponent = e;
  return make(std::move(n));
}

Expr Expr::app(Func f, const Expr& arg) {
  ExprNode n;
  n.kind = ExprKind::App;
  n.func = f;
  n.operands = {arg};
  return make(std::move(n));
}

Expr Expr::operator-() const { return product({number(Rat(-1)), *this}); }

Expr Expr::operator-(const Expr& o) const { return sum({*this, -o}); }

bool Expr::operator==(const Expr& o) const {
  if (p_ == o.p_) return true;
  if (p_->hash != o.p_->hash || p_->kind != o.p_->kind) return false;
  switch (p_->kind) {
    case ExprKind::Number: return p_->number == o.p_->number;
    case ExprKind::Z: return true;
    case ExprKind::Param: return p_->name == o.p_->name;
    case ExprKind::Sum:
    case ExprKind::Product: {
      if (p_->operands.size() != o.p_->operands.size()) return false;
      for (size_t i = 0; i < p_->operands.size(); ++i)
        if (p_->operands[i] != o.p_->operands[i]) return false;
      return true;
    }
    case ExprKind::Power:
      return p_->exponent == o.p_->exponent && p_->operands[0] == o.p_->operands[0];
    case ExprKind::App:
      return p_->func == o.p_->func && p_->operands[0] == o.p_->operands[0];
  }
  return false;
}

void Expr::collect_params(std::set<std::string>& out) const {
  switch (kind()) {
    case ExprKind::Param: out.insert(param_name()); break;
    case ExprKind::Sum:
    case ExprKind::Product:
      for (auto& t : operands()) t.collect_params(out);
      break;
    case ExprKind::Power:
      base().collect_params(out);
      if (!exponent().is_constant()) out.insert(exponent().param);
      break;
    case ExprKind::App: arg().collect_params(out); break;
    default: break;
  }
}

// ---------------------------------------------------------------------------
// Printing. Emits the published grammar; precedence: sum < product < power.

namespace {

std::string exponent_string(const Exponent& e) {
  if (e.is_constant()) {
    if (qfps::is_integer(e.cnst)) return e.cnst.get_str();
    return "(" + e.cnst.get_str() + ")";
  }
  if (e.coef == 1 && qfps::is_zero(e.cnst)) return e.param;
  std::string s = "(";
  if (e.coef == 1) s += e.param;
  else if (e.coef == -1) s += "-" + e.param;
  else s += e.coef.get_str() + "*" + e.param;
  if (!qfps::is_zero(e.cnst))
    s += (sgn(e.cnst) > 0 ? "+" : "-") + Rat(abs(e.cnst)).get_str();
  return s + ")";
}

// level: 1 = sum context, 2 = product context, 3 = power-base context
std::string print(const Expr& e, int level);

std::string print_product(const std::vector<Expr>& fs, int level) {
  // Negative integer powers render as divisions.
  std::string num, den;
  bool lead_neg = false;
  Rat lead(1);
  size_t start = 0;
  if (fs[0].is_number()) {
    lead = fs[0].number_value();
    start = 1;
  }
  if (sgn(lead) < 0) {
    lead_neg = true;
    lead = -lead;
  }
  if (lead != 1 || start == fs.size()) num = lead.get_str();
  for (size_t i = start; i < fs.size(); ++i) {
    const Expr& f = fs[i];
    bool inverted = false;
    Expr shown = f;
    if (f.kind() == ExprKind::Power && f.exponent().is_constant() &&
        qfps::is_integer(f.exponent().cnst) && sgn(f.exponent().cnst) < 0) {
      inverted = true;
      shown = Expr::power(f.base(), Exponent::constant(-f.exponent().cnst));
    }
    std::string piece = print(shown, 2);
    if (inverted) {
      den += den.empty() ? piece : "*" + piece;
    } else {
      num += num.empty() ? piece : "*" + piece;
    }
  }
  if (num.empty()) num = "1";
  std::string out = num;
  if (!den.empty()) out += "/" + den;
  if (lead_neg) {
    out = "-" + out;
    if (level >= 2) out = "(" + out + ")";
  } else if (level >= 3) {
    out = "(" + out + ")";
  }
  return out;
}

std::string print(const Expr& e, int level) {
  switch (e.kind()) {
    case ExprKind::Number: {
      const Rat& r = e.number_value();
      std::string s = r.get_str();
      if ((sgn(r) < 0 && level >= 2) || (!qfps::is_integer(r) && level >= 3))
        s = "(" + s + ")";
      return s;
    }
    case ExprKind::Z: return "z";
    case ExprKind::Param: return e.param_name();
    case ExprKind::Sum: {
      std::string s;
      const auto& ts = e.operands();
      for (size_t i = 0; i < ts.size(); ++i) {
        std::string piece = print(ts[i], 1);
        if (i == 0) {
          s = piece;
        } else if (!piece.empty() && piece[0] == '-') {
          s += " - " + piece.substr(1);
        } else {
          s += " + " + piece;
        }
      }
      if (level >= 2) s = "(" + s + ")";
      return s;
    }
    case ExprKind::Product: return print_product(e.operands(), level);
    case ExprKind::Power:
      return print(e.base(), 3) + "^" + exponent_string(e.exponent());
    case ExprKind::App:
      return std::string(func_name(e.func())) + "(" + print(e.arg(), 0) + ")";
  }
  return "";
}

}  // namespace

std::string Expr::to_string() const { return print(*this, 0); }

// ---------------------------------------------------------------------------
// Parser: recursive descent over the published grammar.

namespace {

struct Parser {
  const std::string& text;
  const std::set<std::string>& params;
  size_t pos = 0;

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
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }

  Int integer() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
    if (pos == start) throw ParseError("expected integer", pos);
    return Int(text.substr(start, pos - start));
  }

  std::string symbol() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  Expr parse_expr() {
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    Expr acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) acc = acc + parse_term();
      else if (eat('-')) acc = acc - parse_term();
      else return acc;
    }
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    for (;;) {
      if (eat('*')) acc = acc * parse_factor();
      else if (eat('/')) acc = acc / parse_factor();
      else return acc;
    }
  }

  Expr parse_factor() {
    Expr b = parse_base();
    if (eat('^')) return Expr::power(b, parse_exponent());
    return b;
  }

  Exponent parse_exponent() {
    skip_ws();
    if (eat('(')) {
      Exponent e = parse_linear();
      expect(')');
      return e;
    }
    bool neg = eat('-');
    Exponent e = parse_exponent_atom();
    return neg ? e * Rat(-1) : e;
  }

  Exponent parse_exponent_atom() {
    char c = peek();
    if (std::isdigit((unsigned char)c)) return Exponent::constant(Rat(integer()));
    std::string s = symbol();
    if (s.empty()) throw ParseError("expected exponent", pos);
    if (s == "z") throw ParseError("exponent must be an integer or a parameter", pos);
    if (!params.count(s)) throw ParseError("unbound symbol '" + s + "'", pos);
    return Exponent::parameter(s);
  }

  // Linear combination c*sym + d inside parenthesized exponents, e.g. (k-1).
  Exponent parse_linear() {
    Exponent acc = Exponent::constant(Rat(0));
    int sign = 1;
    if (eat('-')) sign = -1;
    for (;;) {
      Exponent piece = parse_linear_piece();
      acc = acc + piece * Rat(sign);
      if (eat('+')) sign = 1;
      else if (eat('-')) sign = -1;
      else return acc;
    }
  }

  Exponent parse_linear_piece() {
    char c = peek();
    if (std::isdigit((unsigned char)c)) {
      Rat v(integer());
      if (eat('/')) v /= Rat(integer());
      if (eat('*')) {
        Exponent a = parse_exponent_atom();
        return a * v;
      }
      return Exponent::constant(v);
    }
    return parse_exponent_atom();
  }

  Expr parse_base() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit((unsigned char)c)) {
      Int n = integer();
      return Expr::number(Rat(n));
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t at = pos;
      std::string s = symbol();
      if (peek() == '(') {
        auto f = func_by_name(s);
        if (!f) throw ParseError("unknown function '" + s + "'", at);
        ++pos;
        Expr a = parse_expr();
        expect(')');
        return Expr::app(*f, a);
      }
      if (s == "z") return Expr::z();
      if (params.count(s)) return Expr::param(s);
      throw ParseError("unbound symbol '" + s + "'", at);
    }
    throw ParseError("unexpected character", pos);
  }
};

}  // namespace

Expr parse(const std::string& text, const std::set<std::string>& params) {
  Parser p{text, params};
  Expr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
  return e;
}

// ---------------------------------------------------------------------------
// Differentiation and substitution.

namespace {

Expr exponent_expr(const Exponent& e) {
  if (e.is_constant()) return Expr::number(e.cnst);
  Expr t = Expr::product({Expr::number(e.coef), Expr::param(e.param)});
  if (qfps::is_zero(e.cnst)) return t;
  return Expr::sum({t, Expr::number(e.cnst)});
}

Expr d1(const Expr& e);

Expr chain(Func f, const Expr& u) {
  Expr du = d1(u);
  auto P = [&](const Expr& b, long n) { return Expr::power(b, n); };
  switch (f) {
    case Func::Exp: return du * Expr::app(Func::Exp, u);
    case Func::Log: return du * P(u, -1);
    case Func::Sin: return du * Expr::app(Func::Cos, u);
    case Func::Cos: return -(du * Expr::app(Func::Sin, u));
    case Func::Tan:
      return du * (Expr::integer(1) + P(Expr::app(Func::Tan, u), 2));
    case Func::Sec:
      return du * Expr::app(Func::Sec, u) * Expr::app(Func::Tan, u);
    case Func::Csc:
      return -(du * Expr::app(Func::Csc, u) * Expr::app(Func::Cot, u));
    case Func::Cot:
      return -(du * (Expr::integer(1) + P(Expr::app(Func::Cot, u), 2)));
    case Func::Sinh: return du * Expr::app(Func::Cosh, u);
    case Func::Cosh: return du * Expr::app(Func::Sinh, u);
    case Func::Tanh:
      return du * (Expr::integer(1) - P(Expr::app(Func::Tanh, u), 2));
    case Func::Arcsin:
      return du * P(Expr::app(Func::Sqrt, Expr::integer(1) - P(u, 2)), -1);
    case Func::Arctan:
      return du * P(Expr::integer(1) + P(u, 2), -1);
    case Func::Arcsinh:
      return du * P(Expr::app(Func::Sqrt, Expr::integer(1) + P(u, 2)), -1);
    case Func::Arctanh:
      return du * P(Expr::integer(1) - P(u, 2), -1);
    case Func::Sqrt:
      return du * Expr::number(Rat(1, 2)) * P(Expr::app(Func::Sqrt, u), -1);
  }
  return Expr();
}

Expr d1(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Number:
    case ExprKind::Param: return Expr::number(Rat(0));
    case ExprKind::Z: return Expr::number(Rat(1));
    case ExprKind::Sum: {
      std::vector<Expr> ts;
      for (auto& t : e.operands()) ts.push_back(d1(t));
      return Expr::sum(std::move(ts));
    }
    case ExprKind::Product: {
      const auto& fs = e.operands();
      std::vector<Expr> sum;
      for (size_t i = 0; i < fs.size(); ++i) {
        std::vector<Expr> term;
        term.reserve(fs.size());
        for (size_t j = 0; j < fs.size(); ++j)
          term.push_back(i == j ? d1(fs[j]) : fs[j]);
        sum.push_back(Expr::product(std::move(term)));
      }
      return Expr::sum(std::move(sum));
    }
    case ExprKind::Power: {
      const Exponent& ex = e.exponent();
      return Expr::product({exponent_expr(ex), d1(e.base()),
                            Expr::power(e.base(), ex - 1)});
    }
    case ExprKind::App: return chain(e.func(), e.arg());
  }
  return Expr();
}

}  // namespace

Expr differentiate(const Expr& e, int n) {
  if (n < 0) throw std::domain_error("differentiate: negative order");
  Expr r = e;
  for (int i = 0; i < n; ++i) r = d1(r);
  return r;
}

Expr substitute(const Expr& e, const std::string& target, const Expr& value) {
  switch (e.kind()) {
    case ExprKind::Number: return e;
    case ExprKind::Z: return target == "z" ? value : e;
    case ExprKind::Param: return e.param_name() == target ? value : e;
    case ExprKind::Sum: {
      std::vector<Expr> ts;
      for (auto& t : e.operands()) ts.push_back(substitute(t, target, value));
      return Expr::sum(std::move(ts));
    }
    case ExprKind::Product: {
      std::vector<Expr> ts;
      for (auto& t : e.operands()) ts.push_back(substitute(t, target, value));
      return Expr::product(std::move(ts));
    }
    case ExprKind::Power: {
      Expr b = substitute(e.base(), target, value);
      const Exponent& ex = e.exponent();
      if (!ex.is_constant() && ex.param == target) {
        if (!value.is_number())
          throw std::domain_error(
              "substitute: exponent parameter needs a numeric value");
        return Expr::power(b, Exponent::constant(ex.coef * value.number_value() + ex.cnst));
      }
      return Expr::power(b, ex);
    }
    case ExprKind::App:
      return Expr::app(e.func(), substitute(e.arg(), target, value));
  }
  return e;
}

}  // namespace qfps
