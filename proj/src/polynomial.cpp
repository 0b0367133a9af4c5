#include "emc4/polynomial.hpp"

#include <sstream>

namespace emc4 {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::binomial(const Poly& p, int k) {
  Poly out = constant(1);
  for (int i = 0; i < k; ++i) out = out * (p - constant(i));
  BigInt fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return out * Rational(1, fact);
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(i)];
}

Rational Poly::operator()(const Rational& v) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + *it;
  return acc;
}

Poly Poly::compose(const Poly& inner) const {
  Poly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(*it);
  return acc;
}

Poly Poly::shift(const Rational& c) const { return compose(linear(1, c)); }

Poly Poly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return Poly(d);
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(r);
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Rational(-1); }

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly(r);
}

Poly Poly::operator*(const Rational& k) const {
  std::vector<Rational> r = c_;
  for (auto& v : r) v *= k;
  return Poly(r);
}

bool Poly::coefficients_nonnegative() const {
  for (const auto& v : c_)
    if (v < 0) return false;
  return true;
}

bool Poly::integer_valued() const {
  // Newton forward differences at 0 give the binomial-basis coefficients.
  const int n = degree();
  if (n < 0) return true;
  std::vector<Rational> vals;
  for (int i = 0; i <= n; ++i) vals.push_back((*this)(Rational(i)));
  for (int level = 0; level <= n; ++level) {
    if (denominator_of(vals[0]) != 1) return false;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) vals[i] = vals[i + 1] - vals[i];
    vals.pop_back();
  }
  return true;
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& v = c_[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    first = false;
    const Rational a = v < 0 ? Rational(-v) : v;
    if (i == 0 || a != 1) os << a.str();
    if (i > 0) os << var;
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

Poly2 Poly2::constant(const Rational& c) { return monomial(c, 0, 0); }
Poly2 Poly2::x() { return monomial(1, 1, 0); }
Poly2 Poly2::y() { return monomial(1, 0, 1); }

Poly2 Poly2::monomial(const Rational& c, int i, int j) {
  Poly2 p;
  p.add_term({i, j}, c);
  return p;
}

Poly2 Poly2::binomial(const Poly2& p, int k) {
  Poly2 out = constant(1);
  for (int i = 0; i < k; ++i) out = out * (p - constant(i));
  BigInt fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return out * Rational(1, fact);
}

void Poly2::add_term(const Key& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = t_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 r = *this;
  for (const auto& [k, c] : o.t_) r.add_term(k, c);
  return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * Rational(-1); }

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 r;
  for (const auto& [k1, c1] : t_)
    for (const auto& [k2, c2] : o.t_) r.add_term({k1.first + k2.first, k1.second + k2.second}, c1 * c2);
  return r;
}

Poly2 Poly2::operator*(const Rational& k) const {
  Poly2 r;
  for (const auto& [key, c] : t_) r.add_term(key, c * k);
  return r;
}

namespace {

Rational rpow(const Rational& b, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

Poly2 p2pow(const Poly2& b, int e) {
  Poly2 r = Poly2::constant(1);
  for (int i = 0; i < e; ++i) r = r * b;
  return r;
}

Poly ppow(const Poly& b, int e) {
  Poly r = Poly::constant(1);
  for (int i = 0; i < e; ++i) r = r * b;
  return r;
}

}  // namespace

Rational Poly2::operator()(const Rational& x, const Rational& y) const {
  Rational acc = 0;
  for (const auto& [k, c] : t_) acc += c * rpow(x, k.first) * rpow(y, k.second);
  return acc;
}

Poly2 Poly2::substitute(const Poly2& fx, const Poly2& fy) const {
  Poly2 r;
  for (const auto& [k, c] : t_) r = r + p2pow(fx, k.first) * p2pow(fy, k.second) * c;
  return r;
}

Poly2 Poly2::derivative_x() const {
  Poly2 r;
  for (const auto& [k, c] : t_)
    if (k.first > 0) r.add_term({k.first - 1, k.second}, c * k.first);
  return r;
}

Poly Poly2::restrict_x(const Poly& f) const {
  Poly r;
  for (const auto& [k, c] : t_) r = r + ppow(f, k.first) * ppow(Poly::x(), k.second) * c;
  return r;
}

bool Poly2::coefficients_nonnegative() const {
  for (const auto& [k, c] : t_)
    if (c < 0) return false;
  return true;
}

}  // namespace emc4
