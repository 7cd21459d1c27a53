// Exact rational helpers on top of gmpxx.

#ifndef TROPLIN_RATIONAL_HPP
#define TROPLIN_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace troplin {

using Q = mpq_class;
using Z = mpz_class;

inline Q make_q(long n) { return Q(n); }

inline Q make_q(const Z& n, const Z& d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

inline Q qq(long n, long d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

// Floor and ceiling of a rational as an integer.
inline Z floor_q(const Q& q) {
  Z r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Z ceil_q(const Q& q) {
  Z r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Representative of x modulo p in [0, p).
inline Q mod_q(const Q& x, const Q& p) {
  Q t = x / p;
  Q r = x - Q(floor_q(t)) * p;
  r.canonicalize();
  return r;
}

inline long to_long(const Z& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in long");
  return z.get_si();
}

inline long to_long(const Q& q) {
  if (!is_integer(q)) throw std::domain_error("rational is not an integer");
  return to_long(q.get_num());
}

// Wire format "p/q", denominator always present.
inline std::string q_to_string(const Q& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Q q_from_string(const std::string& s) {
  Q q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline Z binom(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Z(0);
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace troplin

#endif
