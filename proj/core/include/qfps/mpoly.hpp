#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfps/rational.hpp"

namespace qfps {

// Exponent vector; arity is fixed per context (same nvars for all
// polynomials combined in an operation).
struct Monomial {
  std::vector<int> e;

  int total_degree() const {
    int d = 0;
    for (int x : e) d += x;
    return d;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
};

// Graded lexicographic, variable 0 strongest; map is kept in descending
// order so begin() is the leading term.
struct MonoDescending {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db;
    return a.e > b.e;
  }
};

// Sparse multivariate polynomial over Rat. No stored zero coefficients.
class MPoly {
 public:
  using TermMap = std::map<Monomial, Rat, MonoDescending>;

  explicit MPoly(int nvars = 0) : nvars_(nvars) {}

  static MPoly constant(int nvars, const Rat& c);
  static MPoly variable(int nvars, int idx, int power = 1);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_value() const;  // requires is_constant()

  int total_degree() const;  // -1 for zero
  int degree_in(int var) const;
  int low_degree_in(int var) const;

  void add_term(const Monomial& m, const Rat& c);

  MPoly operator-() const;
  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly operator*(const Rat& c) const;
  bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  MPoly pow(int n) const;  // n >= 0
  MPoly derivative(int var) const;

  // Exact division; throws std::domain_error when not divisible.
  MPoly divide_exact(const MPoly& d) const;

  // Substitute variable := rational value.
  MPoly eval_var(int var, const Rat& value) const;
  // Substitute variable := polynomial (same arity as result).
  MPoly subst_var(int var, const MPoly& value) const;

  // Positive rational c such that (*this)/c has coprime integer
  // coefficients; the sign of the leading coefficient is kept.
  Rat content() const;  // zero poly -> 0
  MPoly primitive_part() const;

  const Monomial& leading_monomial() const;
  const Rat& leading_coefficient() const;

  // Leading coefficient viewed as a polynomial in `var` (coefficient of
  // the highest power of var, a polynomial in the other variables).
  MPoly leading_coefficient_in(int var) const;
  // Coefficient of var^k as a polynomial (var-exponent slot zeroed).
  MPoly coefficient_of(int var, int k) const;

  MPoly extended(int new_nvars) const;  // pad exponent vectors with zeros

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int nvars_;
  TermMap terms_;
};

MPoly operator*(const Rat& c, const MPoly& p);

// Multivariate gcd (primitive PRS); result is primitive with positive
// leading coefficient, gcd(p, 0) = primitive part of p.
MPoly gcd(const MPoly& a, const MPoly& b);
MPoly lcm(const MPoly& a, const MPoly& b);

// Rising factorial x(x+1)...(x+k-1) in the polynomial ring; (x)_0 = 1.
MPoly pochhammer(const MPoly& x, unsigned k);

// All integer roots of a univariate polynomial (variable `var`,
// other variables must not occur).
std::vector<long> integer_roots(const MPoly& p, int var);

}  // namespace qfps
