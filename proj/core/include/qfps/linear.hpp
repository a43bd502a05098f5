#pragma once

#include <optional>
#include <vector>

#include "qfps/ratfunc.hpp"

namespace qfps {

// Solve A x = b over the fraction field, A an m x n matrix. Returns one
// exact solution when the system is consistent (free unknowns are set to
// zero; the solution is unique when rank = n), std::nullopt otherwise.
//
// Fraction-free (Bareiss) elimination with full pivoting; pivots are
// chosen by smallest numerator total degree, ties broken by column order
// then row order.
std::optional<std::vector<RatFunc>> solve_linear(
    const std::vector<std::vector<RatFunc>>& A, const std::vector<RatFunc>& b);

}  // namespace qfps
