#pragma once

// Exact rational polynomials in one and two variables.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "emc4/rational.hpp"

namespace emc4 {

class Poly {
 public:
  Poly() = default;
  Poly(std::vector<Rational> coeffs);
  static Poly constant(const Rational& c) { return Poly({c}); }
  static Poly x() { return Poly({Rational(0), Rational(1)}); }
  /// a*x + b
  static Poly linear(const Rational& a, const Rational& b) { return Poly({b, a}); }
  /// Falling-factorial binomial p(p-1)...(p-k+1)/k!.
  static Poly binomial(const Poly& p, int k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;

  Rational operator()(const Rational& v) const;
  Poly compose(const Poly& inner) const;
  /// p(x + c)
  Poly shift(const Rational& c) const;
  Poly derivative() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& k) const;
  friend bool operator==(const Poly&, const Poly&) = default;

  /// Every coefficient >= 0 (so p(v) >= 0 for v >= 0).
  bool coefficients_nonnegative() const;
  /// Takes integer values at every integer (binomial-basis coefficients integral).
  bool integer_valued() const;
  std::string str(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Polynomial in two variables (x, y); exponents keyed as (i, j) for x^i y^j.
class Poly2 {
 public:
  using Key = std::pair<int, int>;
  Poly2() = default;
  static Poly2 constant(const Rational& c);
  static Poly2 x();
  static Poly2 y();
  static Poly2 monomial(const Rational& c, int i, int j);
  static Poly2 binomial(const Poly2& p, int k);

  const std::map<Key, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(const Rational& k) const;
  friend bool operator==(const Poly2&, const Poly2&) = default;

  Rational operator()(const Rational& x, const Rational& y) const;
  /// Substitute x := fx(x, y), y := fy(x, y).
  Poly2 substitute(const Poly2& fx, const Poly2& fy) const;
  Poly2 derivative_x() const;
  /// Restrict to y only after substituting x := f(y).
  Poly restrict_x(const Poly& f) const;
  bool coefficients_nonnegative() const;

 private:
  void add_term(const Key& k, const Rational& c);
  std::map<Key, Rational> t_;
};

}  // namespace emc4
