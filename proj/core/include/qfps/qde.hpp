#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfps/expr.hpp"
#include "qfps/mpoly.hpp"
#include "qfps/tower.hpp"

namespace qfps {

// The quadratic-derivative scheme enumerates 1, f, f^2, f', f'f, (f')^2,
// f'', ... row by row; index_pair(k) resolves position k to the pair
// (i, j), i >= j >= 1, whose monomial is f^(i-2) * f^(j-2) under the
// conventions f^(-1) = 1 and f^(0) = f.
std::pair<int, int> index_pair(int k);
// Inverse of index_pair.
int scheme_index(int i, int j);

// The k-th quadratic derivative of f as an expression tree.
Expr delta2(const Expr& f, int k);

// One differential monomial: y^(a) * y^(b) with a >= b >= -1 and the
// convention y^(-1) = 1, so b == -1 makes the monomial linear and
// (a, b) == (0, -1) is y itself.
struct DiffMono {
  int a = 0, b = -1;
  bool is_linear() const { return b < 0; }
  bool operator==(const DiffMono& o) const { return a == o.a && b == o.b; }
  bool operator<(const DiffMono& o) const {
    return scheme_index(a + 2, b + 2) < scheme_index(o.a + 2, o.b + 2);
  }
};

// Homogeneous quadratic differential equation with polynomial
// coefficients: sum of coeff(z, params) * monomial = 0. Coefficients are
// cleared of denominators and common content; the highest-index monomial
// has a positive leading coefficient.
struct QDE {
  std::vector<std::string> params;                  // coefficient variables after z
  std::vector<std::pair<MPoly, DiffMono>> terms;    // ascending scheme index

  int order() const;          // highest derivative order
  int leading_index() const;  // scheme index of the last term
  bool is_linear_ode() const; // no quadratic monomial
  bool operator==(const QDE& o) const { return params == o.params && terms == o.terms; }
};

struct QdeSearchError : std::runtime_error {
  explicit QdeSearchError(const std::string& m) : std::runtime_error(m) {}
};

struct FindOptions {
  std::vector<std::string> params;
  int max_index = 21;
  int depth_limit = 16;
};

// Ansatz search for a least-order QDE satisfied by f: leading indices
// are tried in increasing order, the ansatz with normalized leading
// coefficient 1 is expanded over the differential tower, and kernel-
// monomial coefficients are equated to zero and solved. The result is
// verified by resubstitution before it is returned.
//
// Failure up to max_index throws QdeSearchError; that is not a proof
// that no QDE exists.
QDE find_qde(const Expr& f, const FindOptions& opt = {});

// Substitute f into q and decide exact vanishing over the tower.
bool verify_qde(const Expr& f, const QDE& q);

// Try a single leading index; nullopt when the linear system is
// inconsistent. Used by find_qde and by minimality checks.
std::optional<QDE> try_leading_index(Tower& tower, const std::vector<CanonicalForm>& delta2_cf,
                                     int leading, const std::vector<std::string>& params);

// Text form, e.g. "(1+z)*y' + y^2 = 0"; parseable by parse_qde.
std::string to_string(const QDE& q);
QDE parse_qde(const std::string& text, const std::vector<std::string>& params = {});

}  // namespace qfps
