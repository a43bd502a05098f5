#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qfps/expr.hpp"
#include "qfps/ratfunc.hpp"
#include "qfps/series.hpp"

namespace qfps {

struct TowerError : std::runtime_error {
  explicit TowerError(const std::string& msg) : std::runtime_error(msg) {}
};

// A transcendental kernel: a subexpression whose z-derivative re-expresses
// rationally in z, the parameters, and the kernels. Trig appears only as
// sin/cos pairs, hyperbolics as sinh/cosh pairs.
struct Kernel {
  enum class Kind {
    Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt,
    Arcsin, Arctan, Arcsinh, Arctanh, ParamPow,
  };
  Kind kind;
  Expr def;            // defining expression, e.g. sin(2*z), sec(z)^k
  RatFunc arg;         // canonical form of the argument (identity key)
  std::string param;   // ParamPow only
  RatFunc derivative;  // d/dz over the tower variables
  RatFunc radicand;    // Sqrt only: canonical radicand (R^2 = radicand)
  int partner = -1;    // sin <-> cos, sinh <-> cosh
  int depth = 1;
};

class Tower;

// Rational function in z, the parameters, and the tower kernels, kept
// trig-reduced (sin/sinh degree <= 1, sqrt degree <= 1) with a kernel-
// relation-free denominator. Zero iff the numerator is the zero polynomial.
class CanonicalForm {
 public:
  CanonicalForm() : tower_(nullptr), f_(0) {}
  CanonicalForm(const Tower* t, RatFunc f) : tower_(t), f_(std::move(f)) {}

  const RatFunc& ratfunc() const { return f_; }
  const Tower* tower() const { return tower_; }

  bool is_zero() const { return f_.is_zero(); }
  // Free of kernel variables, i.e. an element of K(z).
  bool is_rational() const;

  CanonicalForm operator+(const CanonicalForm& o) const;
  CanonicalForm operator-(const CanonicalForm& o) const;
  CanonicalForm operator*(const CanonicalForm& o) const;
  CanonicalForm operator/(const CanonicalForm& o) const;
  CanonicalForm operator-() const;
  CanonicalForm pow(int n) const;
  CanonicalForm derivative() const;

  bool equals(const CanonicalForm& o) const;

  std::string to_string() const;

 private:
  friend class Tower;
  const Tower* tower_;
  RatFunc f_;
};

// Differential tower for a family of expressions; kernels are discovered
// on demand while canonicalizing and are closed under differentiation by
// construction.
class Tower {
 public:
  explicit Tower(std::vector<std::string> params = {}, int depth_limit = 16);

  // Convert an expression into its canonical form, extending the tower
  // as needed. Throws TowerError when the tower cannot be closed within
  // the depth limit or the expression leaves the catalog's reach.
  CanonicalForm canonicalize(const Expr& e);

  CanonicalForm constant(const Rat& c) const;
  CanonicalForm from_ratfunc(RatFunc f) const { return CanonicalForm(this, reduce(std::move(f))); }

  int nparams() const { return (int)params_.size(); }
  int nkernels() const { return (int)kernels_.size(); }
  int nvars() const { return 1 + nparams() + nkernels(); }
  int kernel_var(int k) const { return 1 + nparams() + k; }
  bool is_kernel_var(int v) const { return v > nparams(); }
  const Kernel& kernel(int k) const { return kernels_[k]; }
  const std::vector<std::string>& params() const { return params_; }
  std::vector<std::string> var_names() const;

  // d/dz through the kernel chain rule; result reduced.
  RatFunc d_dz(const RatFunc& f) const;
  // Reduce modulo the kernel relations and clear them from the denominator.
  RatFunc reduce(RatFunc f) const;

 private:
  friend class CanonicalForm;
  RatFunc canon(const Expr& e, int depth);
  int ensure_kernel(Kernel::Kind kind, const Expr& def, const RatFunc& arg_cf,
                    const std::string& param, int depth);
  RatFunc var(int idx) const { return RatFunc::variable(nvars(), idx); }
  RatFunc poly_dz(const MPoly& p) const;
  // Reduce relation-kernel powers in a polynomial; may introduce a
  // denominator (sqrt radicands are rational).
  RatFunc reduce_poly(MPoly p) const;

  std::vector<std::string> params_;
  std::vector<Kernel> kernels_;
  int depth_limit_;
};

// Split the numerator by kernel monomials; each row is the monomial's
// exponents over the kernel variables together with its coefficient, a
// rational function in z and the parameters. Rows are the linear-system
// input for the ansatz solver.
struct KernelRow {
  std::vector<int> kernel_exponents;
  RatFunc coefficient;  // nvars = 1 + nparams
};
std::vector<KernelRow> collect_kernel_coefficients(const CanonicalForm& cf);

// Evaluate a canonical form as a truncated series through z^order by
// expanding each kernel's defining expression (parameter-free towers only).
TruncSeries cf_to_series(const CanonicalForm& cf, int order);

}  // namespace qfps
