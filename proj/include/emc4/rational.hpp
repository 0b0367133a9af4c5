#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace emc4 {

// Expression templates off: `auto` on an expression would otherwise dangle.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

/// Thrown when a finite check that the proof depends on does not hold.
class ProofError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration or resource problems (iteration caps, bad input files).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(const BigInt& z) { return z.str(); }

/// Exact binomial coefficient; zero when k < 0 or n < k (n may be negative only
/// through the falling-factorial convention, which callers never rely on).
inline BigInt binomial(const BigInt& n, int k) {
  if (k < 0 || n < k) return 0;
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (n - i);
    den *= (i + 1);
  }
  return num / den;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

}  // namespace emc4
