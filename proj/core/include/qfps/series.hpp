#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfps/expr.hpp"
#include "qfps/rational.hpp"

namespace qfps {

// Truncated Laurent series with exact rational coefficients: the
// coefficient of z^x is c[x - off] for off <= x < valid, zero for x < off,
// and unknown from exponent `valid` on.
struct TruncSeries {
  int off = 0;
  int valid = 0;
  std::vector<Rat> c;

  Rat coeff(int exponent) const {
    if (exponent < off) return Rat(0);
    if (exponent >= valid) throw std::logic_error("series: coefficient beyond validity");
    return c[exponent - off];
  }
  // First exponent with a nonzero coefficient, if one is known.
  std::optional<int> valuation() const {
    for (size_t i = 0; i < c.size(); ++i)
      if (!qfps::is_zero(c[i])) return off + (int)i;
    return std::nullopt;
  }
  // Lower bound for the valuation (valid when no nonzero coefficient is known).
  int vbound() const { return valuation().value_or(valid); }
  bool is_zero_to_validity() const { return !valuation().has_value(); }
};

struct SeriesError : std::runtime_error {
  enum class Kind { Unsupported, Branch, Puiseux, Parameterized, Precision };
  Kind kind;
  SeriesError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Internal retry signal: an operation ran out of tracked coefficients.
// Drivers catch it and repeat with a larger bound.
struct PrecisionShortfall {};

// Truncated arithmetic; `bound` caps the tracked exponents (exclusive).
TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_neg(const TruncSeries& a);
TruncSeries ts_scale(const TruncSeries& a, const Rat& s);
TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b, int bound);
TruncSeries ts_recip(const TruncSeries& a, int bound);
TruncSeries ts_pow(const TruncSeries& a, int n, int bound);
TruncSeries ts_derivative(const TruncSeries& a);

// Exact coefficients of e at z = 0 through z^order. The expression must
// be parameter-free and admit a Laurent expansion at 0.
TruncSeries series_of(const Expr& e, int order);

// Least exponent with a nonzero coefficient, searched adaptively up to
// the cap; nullopt signals "possibly identically zero".
std::optional<int> valuation(const Expr& e, int cap = 64);

}  // namespace qfps
