#include "qfps/ratfunc.hpp"

#include <cassert>
#include <stdexcept>

namespace qfps {

RatFunc::RatFunc(MPoly num, MPoly den, bool do_normalize)
    : num_(std::move(num)), den_(std::move(den)) {
  assert(num_.nvars() == den_.nvars());
  if (den_.is_zero()) throw std::domain_error("ratfunc: zero denominator");
  if (do_normalize) normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = MPoly::constant(den_.nvars(), Rat(1));
    return;
  }
  MPoly g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = num_.divide_exact(g);
    den_ = den_.divide_exact(g);
  }
  // Scale so the denominator's leading-in-z coefficient is 1 when it is
  // rational; with parameters present, make it primitive and positive.
  MPoly lead = den_.leading_coefficient_in(0);
  Rat scale;
  if (lead.is_constant()) {
    scale = Rat(1) / lead.constant_value();
  } else {
    scale = Rat(1) / lead.content();
    if (sgn(lead.leading_coefficient()) < 0) scale = -scale;
  }
  if (scale != 1) {
    num_ = num_ * scale;
    den_ = den_ * scale;
  }
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, false); }

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::domain_error("ratfunc: division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::pow(int n) const {
  if (n == 0) return RatFunc::constant(nvars(), Rat(1));
  if (n < 0) {
    if (is_zero()) throw std::domain_error("ratfunc: division by zero");
    return RatFunc(den_.pow(-n), num_.pow(-n));
  }
  return RatFunc(num_.pow(n), den_.pow(n), false);
}

bool RatFunc::equals(const RatFunc& o) const {
  return (num_ * o.den_) == (o.num_ * den_);
}

RatFunc RatFunc::extended(int new_nvars) const {
  return RatFunc(num_.extended(new_nvars), den_.extended(new_nvars), false);
}

std::string RatFunc::to_string(const std::vector<std::string>& names) const {
  if (is_polynomial() && den_.constant_value() == 1) return num_.to_string(names);
  std::string n = num_.to_string(names);
  std::string d = den_.to_string(names);
  if (num_.terms().size() > 1) n = "(" + n + ")";
  if (den_.terms().size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace qfps
