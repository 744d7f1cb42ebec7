#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holgr {

using Rational = mpq_class;
using Integer = mpz_class;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(long n);
long euler_phi(long m);
long gcd_l(long a, long b);
long lcm_l(long a, long b);
long mod_l(long a, long m);
long pow_mod(long base, long exp, long m);
std::vector<long> prime_divisors(long n);
std::vector<long> divisors(long n);
// (p, a) with n = p^a, or nullopt if n is not a prime power (> 1).
std::optional<std::pair<long, long>> prime_power(long n);

// nullopt encodes +infinity (the valuation of zero).
std::optional<long> padic_valuation(const Integer& x, long p);
std::optional<long> padic_valuation(const Rational& x, long p);
long vp(long n, long p);
bool is_p_integral(const Rational& x, long p);

struct RationalVal {
  Rational value;
  long p = 2;
  std::optional<long> valuation;

  static RationalVal of(const Rational& x, long p);
  std::string to_string() const;
};

// Integer coefficients of Phi_m, constant term first; cached.
const std::vector<long>& cyclotomic_polynomial(long m);

// Element of Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1) reduced modulo Phi_m.
class CycloNum {
 public:
  CycloNum();
  explicit CycloNum(long m);
  CycloNum(const Rational& r, long m = 1);  // NOLINT(google-explicit-constructor)
  CycloNum(long r, long m);

  static CycloNum zeta(long m, long k = 1);
  static CycloNum from_exponents(long m, const std::vector<Rational>& by_exponent);

  long conductor() const { return m_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  Rational to_rational() const;  // throws unless is_rational()
  bool is_algebraic_integer() const;
  bool is_p_integral(long p) const;
  std::optional<long> min_coeff_valuation(long p) const;

  CycloNum embed(long m2) const;
  CycloNum descend(long d) const;  // throws if not in Q(zeta_d)
  long minimal_conductor() const;
  CycloNum galois(long k) const;
  CycloNum conj() const { return galois(-1); }
  CycloNum inv() const;

  CycloNum& operator+=(const CycloNum& o);
  CycloNum& operator-=(const CycloNum& o);
  CycloNum& operator*=(const CycloNum& o);
  CycloNum& operator*=(const Rational& r);
  CycloNum operator-() const;

  friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
  friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
  friend CycloNum operator*(CycloNum a, const CycloNum& b) { return a *= b; }
  friend CycloNum operator*(CycloNum a, const Rational& r) { return a *= r; }
  friend CycloNum operator*(const Rational& r, CycloNum a) { return a *= r; }
  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inv(); }
  friend bool operator==(const CycloNum& a, const CycloNum& b);
  friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

  // Canonical text: value in its minimal conductor, "c0 + c1*z + c2*z^2 @m"; rationals print bare.
  std::string to_string() const;
  // Total order on canonical forms (conductor first, then coefficients).
  static int compare(const CycloNum& a, const CycloNum& b);

 private:
  long m_;
  std::vector<Rational> c_;
};

std::ostream& operator<<(std::ostream& os, const CycloNum& x);

}  // namespace holgr
