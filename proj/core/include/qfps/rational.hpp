#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>

namespace qfps {

using Int = mpz_class;
// Canonical exact rational: denominator > 0, gcd(num, den) = 1.
// mpq_class arithmetic preserves canonical form; only raw (num, den)
// construction needs an explicit canonicalize, which make_rat does.
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::optional<long> to_long(const Rat& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p()) return std::nullopt;
  return r.get_num().get_si();
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Exact square root of a nonnegative rational, if it is one.
inline std::optional<Rat> rat_sqrt(const Rat& r) {
  if (sgn(r) < 0) return std::nullopt;
  Int sn, sd;
  mpz_sqrt(sn.get_mpz_t(), r.get_num().get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), r.get_den().get_mpz_t());
  if (sn * sn != r.get_num() || sd * sd != r.get_den()) return std::nullopt;
  return make_rat(sn, sd);
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  Rat b = e < 0 ? Rat(1) / base : base;
  unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), b.get_num_mpz_t(), n);
  mpz_pow_ui(out.get_den_mpz_t(), b.get_den_mpz_t(), n);
  return out;
}

inline Rat binomial(unsigned long n, unsigned long k) {
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rat(b);
}

inline Int factorial(unsigned long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace qfps
