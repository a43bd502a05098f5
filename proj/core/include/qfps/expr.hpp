#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfps/rational.hpp"

namespace qfps {

// Closed function catalog; parsing anything else is an error.
enum class Func {
  Exp, Log, Sin, Cos, Tan, Sec, Csc, Cot,
  Sinh, Cosh, Tanh, Arcsin, Arctan, Arcsinh, Arctanh, Sqrt,
};

const char* func_name(Func f);
std::optional<Func> func_by_name(const std::string& name);

// Exponents are restricted to c*param + d with rational c, d (covering
// integer powers and parameter powers like sec(z)^k and its derivatives).
struct Exponent {
  Rat coef;           // coefficient of the parameter; 0 when constant
  std::string param;  // empty when constant
  Rat cnst;

  static Exponent integer(long v) { return {Rat(0), "", Rat(v)}; }
  static Exponent constant(const Rat& v) { return {Rat(0), "", v}; }
  static Exponent parameter(const std::string& p) { return {Rat(1), p, Rat(0)}; }

  bool is_constant() const { return param.empty() || qfps::is_zero(coef); }
  bool is_integer() const { return is_constant() && qfps::is_integer(cnst); }
  std::optional<long> as_long() const {
    return is_constant() ? to_long(cnst) : std::nullopt;
  }
  Exponent operator-(long v) const { return {coef, param, cnst - Rat(v)}; }
  Exponent operator*(const Rat& s) const;
  Exponent operator+(const Exponent& o) const;  // throws on two distinct params
  bool operator==(const Exponent& o) const;
};

class Expr;

enum class ExprKind { Number, Z, Param, Sum, Product, Power, App };

struct ExprNode {
  ExprKind kind;
  Rat number;                   // Number
  std::string name;             // Param
  std::vector<Expr> operands;   // Sum, Product; [base] for Power; [arg] for App
  Exponent exponent;            // Power
  Func func = Func::Exp;        // App
  size_t hash = 0;
};

// Immutable expression tree handle. Sums and products are n-ary and
// flattened; rational constants are folded at construction.
class Expr {
 public:
  Expr() : p_(zero_node()) {}

  static Expr number(const Rat& r);
  static Expr integer(long v) { return number(Rat(v)); }
  static Expr z();
  static Expr param(const std::string& name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Exponent& e);
  static Expr power(const Expr& base, long e) { return power(base, Exponent::integer(e)); }
  static Expr app(Func f, const Expr& arg);

  ExprKind kind() const { return p_->kind; }
  const Rat& number_value() const { return p_->number; }
  const std::string& param_name() const { return p_->name; }
  const std::vector<Expr>& operands() const { return p_->operands; }
  const Expr& base() const { return p_->operands[0]; }
  const Exponent& exponent() const { return p_->exponent; }
  Func func() const { return p_->func; }
  const Expr& arg() const { return p_->operands[0]; }

  bool is_number() const { return kind() == ExprKind::Number; }
  bool is_zero() const { return is_number() && qfps::is_zero(number_value()); }
  bool is_one() const { return is_number() && number_value() == 1; }

  size_t hash() const { return p_->hash; }
  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }

  // Free parameter symbols (everything except z).
  void collect_params(std::set<std::string>& out) const;

  std::string to_string() const;

  Expr operator+(const Expr& o) const { return sum({*this, o}); }
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const { return product({*this, o}); }
  Expr operator/(const Expr& o) const { return product({*this, power(o, -1)}); }
  Expr operator-() const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> p) : p_(std::move(p)) {}
  static std::shared_ptr<const ExprNode> zero_node();
  static Expr make(ExprNode&& n);
  std::shared_ptr<const ExprNode> p_;
};

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
};

// Grammar:
//   expr     := ('+'|'-')? term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' exponent)?
//   base     := number | 'z' | symbol | func '(' expr ')' | '(' expr ')'
//   number   := integer ('/' integer)?
//   exponent := ('-')? (integer | symbol) | '(' linear-in-one-symbol ')'
// Whitespace is insignificant. Any free symbol other than z must be
// listed in params.
Expr parse(const std::string& text, const std::set<std::string>& params = {});

Expr differentiate(const Expr& e, int n = 1);
Expr substitute(const Expr& e, const std::string& target, const Expr& value);

}  // namespace qfps
