#pragma once

#include <string>
#include <vector>

#include "qfps/mpoly.hpp"

namespace qfps {

// Element of the fraction field of MPoly. Kept reduced by gcd and
// content; the denominator's leading coefficient in variable 0 is made
// monic when it is rational, otherwise scaled primitive and positive.
class RatFunc {
 public:
  explicit RatFunc(int nvars = 0)
      : num_(nvars), den_(MPoly::constant(nvars, Rat(1))) {}
  RatFunc(MPoly num, MPoly den, bool do_normalize = true);

  static RatFunc constant(int nvars, const Rat& c) {
    return RatFunc(MPoly::constant(nvars, c), MPoly::constant(nvars, Rat(1)), false);
  }
  static RatFunc from_poly(MPoly p) {
    int nv = p.nvars();
    return RatFunc(std::move(p), MPoly::constant(nv, Rat(1)), false);
  }
  static RatFunc variable(int nvars, int idx, int power = 1) {
    return from_poly(MPoly::variable(nvars, idx, power));
  }

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  int nvars() const { return num_.nvars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc pow(int n) const;  // any integer

  // Exact equality by cross-multiplication.
  bool equals(const RatFunc& o) const;
  bool operator==(const RatFunc& o) const { return equals(o); }

  RatFunc extended(int new_nvars) const;

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void normalize();
  MPoly num_, den_;
};

}  // namespace qfps
