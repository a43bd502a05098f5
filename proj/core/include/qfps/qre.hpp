#pragma once

#include <string>
#include <vector>

#include "qfps/mpoly.hpp"
#include "qfps/qde.hpp"

namespace qfps {

// p(n) * a_{n+shift}; p over variables [n, params...].
struct LinearTerm {
  MPoly poly;
  int shift;
  bool operator==(const LinearTerm& o) const {
    return shift == o.shift && poly == o.poly;
  }
};

// scale * sum_{k=0}^{n-p} (k+1)_i (n-p-k+1)_j a_{k+i} a_{n-p-k+j};
// the scale carries the parameter monomials (no n). Sums with n-p < 0
// are empty. The first factor carries the higher derivative order.
struct ConvTerm {
  MPoly scale;
  int i, j, p;
  bool operator==(const ConvTerm& o) const {
    return i == o.i && j == o.j && p == o.p && scale == o.scale;
  }
};

// Quadratic recurrence: sum of linear and convolution terms equals 0 for
// all n >= 0, with a_m = 0 for m < 0.
struct QRE {
  std::vector<std::string> params;
  std::vector<LinearTerm> linear;  // descending shift
  std::vector<ConvTerm> convs;     // ascending (i, j, p)

  bool operator==(const QRE& o) const {
    return params == o.params && linear == o.linear && convs == o.convs;
  }
};

// Rewrite each differential monomial: z^p y^(j) becomes
// (n+1-p)_j a_{n+j-p}, and z^p y^(i) y^(j) becomes the convolution term
// (i, j, p). Like terms are merged.
QRE qde_to_qre(const QDE& q);

// The recurrence at a fixed n, reduced to a polynomial in the single
// highest-index coefficient x = a_{unknown}: quad*x^2 + lin*x + cst.
// Known coefficients come from `prefix` (a_0.. in order); negative
// indices are absent. A product with one uncovered factor is tolerated
// when the covered factor is exactly zero.
struct LocalEq {
  Rat quad, lin, cst;
  int unknown;  // -1 when no coefficient appears at this n
};
struct InsufficientPrefix : std::runtime_error {
  explicit InsufficientPrefix(const std::string& m) : std::runtime_error(m) {}
};
LocalEq evaluate_qre(const QRE& r, const std::vector<Rat>& prefix, int n);

// Exact check that a coefficient stream satisfies the recurrence at n.
bool qre_holds_at(const QRE& r, const std::vector<Rat>& coeffs, int n);

std::string to_string(const QRE& r);
QRE parse_qre(const std::string& text, const std::vector<std::string>& params = {});

}  // namespace qfps
