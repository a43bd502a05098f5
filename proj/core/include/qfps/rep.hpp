#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfps/qde.hpp"
#include "qfps/qre.hpp"
#include "qfps/series.hpp"

namespace qfps {

// The recurrence solved for its highest-index coefficient a_{n+M}:
//
//   D(n) * a_{n+M} + sum(lin) + sum(conv remainders) = 0   for n >= valid_from
//
// Convolution boundary summands (k = 0 and k = n-p) are peeled off
// symbolically; the ones that reach a_{n+M} form D(n) together with the
// original shift-M linear terms, the others carry a frozen initial value
// and live in `lin`. Each stored convolution therefore stands for its
// remainder: the full sum minus both symbolic boundary summands (for
// n-p >= 2 that is the interior sum over k = 1..n-p-1, with the usual
// a_m = 0 convention for m < 0).
struct SolvedRecurrence {
  int lhs_offset = 0;          // M
  MPoly denom{1};              // D(n), univariate in n
  std::vector<LinearTerm> lin; // shifts < M, polynomials in n
  std::vector<ConvTerm> convs; // remainder semantics
  int valid_from = 0;          // n0; initial values cover 0..n0+M-1
};

// Normal form of the power series of `input`: the series is
// sum_{n>=0} a_n z^(n+shift); a_0..a_{m-1} are stored and the solved
// recurrence produces everything after.
struct SeriesRep {
  Expr input;
  int shift = 0;
  bool proven_zero = false;
  bool implicit = false;  // denominator vanished; the unsolved QRE drives unrolling
  QDE qde;
  QRE qre;
  SolvedRecurrence rec;
  std::vector<Rat> ivals;
  std::vector<int> oracle_resolved;  // indices settled by the oracle below valid_from

  bool same_normal_form(const SeriesRep& o) const;
};

struct RepError : std::runtime_error {
  explicit RepError(const std::string& m) : std::runtime_error(m) {}
};

using CoeffProvider = std::function<Rat(int)>;

// Solve a parameter-free QRE for its highest-index coefficient; the
// oracle supplies the initial values (and settles degenerate small n).
// valuation_floor is the valuation of the underlying coefficient stream;
// leading zero coefficients are kept as initial values rather than
// produced by the recurrence.
std::pair<SolvedRecurrence, std::vector<Rat>> solve_recurrence(
    const QRE& r, const CoeffProvider& oracle, int valuation_floor);

// Compatibility wrapper with an explicit prefix of series coefficients.
std::pair<SolvedRecurrence, std::vector<Rat>> solve_recurrence(
    const QRE& r, const std::vector<Rat>& prefix, int valuation_floor = 0);

struct FpsOptions {
  int max_index = 21;
  int depth_limit = 16;
  int check_depth = 12;  // unrolled-vs-oracle validation depth
};

// Normal-form construction: shift by the valuation, find a QDE, convert
// to a QRE, solve, attach initial values. Proven-zero when a QDE plus
// all-zero initial values force every coefficient to vanish.
SeriesRep fps(const Expr& f, const FpsOptions& opt = {});

// Coefficients a_0..a_{count-1} of the shifted stream.
std::vector<Rat> unroll(const SeriesRep& rep, int count);

// Truncated expansion through z^order via the representation; exact
// agreement with series_of is asserted.
TruncSeries qtaylor(const Expr& f, int order, const FpsOptions& opt = {});

struct Verdict {
  enum class Kind { Equal, NotEqual, Undecided };
  Kind kind;
  // NotEqual: first differing coefficient
  int witness_exponent = 0;
  Rat lhs_coeff, rhs_coeff;
  std::string reason;
};

// Zero-equivalence: series probe for a counterexample, then a quick
// difference representation, then normal-form comparison, then the full
// difference route.
Verdict prove(const Expr& a, const Expr& b, const FpsOptions& opt = {});

std::string to_string(const SeriesRep& rep);

}  // namespace qfps
