#include "qfps/linear.hpp"

#include <cassert>
#include <numeric>

namespace qfps {

std::optional<std::vector<RatFunc>> solve_linear(
    const std::vector<std::vector<RatFunc>>& A, const std::vector<RatFunc>& b) {
  const int m = (int)A.size();
  const int n = m ? (int)A[0].size() : (b.empty() ? 0 : (int)b.size() * 0);
  assert((int)b.size() == m);
  if (m == 0) return std::vector<RatFunc>();
  const int nv = A[0].empty() ? b[0].nvars() : A[0][0].nvars();

  // Clear denominators row by row; entries become polynomials.
  std::vector<std::vector<MPoly>> M(m);
  for (int i = 0; i < m; ++i) {
    assert((int)A[i].size() == n);
    MPoly common = MPoly::constant(nv, Rat(1));
    for (int j = 0; j < n; ++j) common = lcm(common, A[i][j].den());
    common = lcm(common, b[i].den());
    M[i].reserve(n + 1);
    for (int j = 0; j < n; ++j)
      M[i].push_back(A[i][j].num() * common.divide_exact(A[i][j].den()));
    M[i].push_back(b[i].num() * common.divide_exact(b[i].den()));
  }

  std::vector<int> col(n);  // column permutation: position -> unknown
  std::iota(col.begin(), col.end(), 0);

  MPoly prev = MPoly::constant(nv, Rat(1));
  int rank = 0;
  for (; rank < n && rank < m; ++rank) {
    // Pivot: nonzero entry of smallest total degree; ties by column, then row.
    int pr = -1, pc = -1, best = -1;
    for (int j = rank; j < n; ++j) {
      for (int i = rank; i < m; ++i) {
        const MPoly& e = M[i][col[j]];
        if (e.is_zero()) continue;
        int d = e.total_degree();
        if (best < 0 || d < best) {
          best = d;
          pr = i;
          pc = j;
        }
      }
    }
    if (pr < 0) break;
    std::swap(M[rank], M[pr]);
    std::swap(col[rank], col[pc]);

    const MPoly& piv = M[rank][col[rank]];
    for (int i = rank + 1; i < m; ++i) {
      if (M[i][col[rank]].is_zero() ) {
        // Still rescale by pivot/prev to keep the Bareiss invariant.
        for (int j = rank + 1; j <= n; ++j) {
          int cj = j < n ? col[j] : n;
          M[i][cj] = (piv * M[i][cj]).divide_exact(prev);
        }
        M[i][col[rank]] = MPoly(nv);
        continue;
      }
      for (int j = rank + 1; j <= n; ++j) {
        int cj = j < n ? col[j] : n;
        M[i][cj] = (piv * M[i][cj] - M[i][col[rank]] * M[rank][cj]).divide_exact(prev);
      }
      M[i][col[rank]] = MPoly(nv);
    }
    prev = piv;
  }

  // Consistency: rows past the rank must have zero right-hand side.
  for (int i = rank; i < m; ++i) {
    bool all_zero = true;
    for (int j = 0; j < n; ++j)
      if (!M[i][j].is_zero()) { all_zero = false; break; }
    if (all_zero && !M[i][n].is_zero()) return std::nullopt;
  }

  // Back-substitution over the fraction field; free unknowns are zero.
  std::vector<RatFunc> x(n, RatFunc::constant(nv, Rat(0)));
  for (int r = rank - 1; r >= 0; --r) {
    RatFunc acc = RatFunc::from_poly(M[r][n]);
    for (int j = r + 1; j < n; ++j) {
      if (M[r][col[j]].is_zero() || x[col[j]].is_zero()) continue;
      acc = acc - RatFunc::from_poly(M[r][col[j]]) * x[col[j]];
    }
    x[col[r]] = acc / RatFunc::from_poly(M[r][col[r]]);
  }
  return x;
}

}  // namespace qfps
