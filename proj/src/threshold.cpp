#include "emc4/threshold.hpp"

#include <algorithm>
#include <map>

namespace emc4 {

BigInt a4(long s) { return binomial(BigInt(4 * s + 3), 4); }

BigInt b4(long n, long s) { return binomial(BigInt(n), 4) - binomial(BigInt(n - s), 4); }

long m_of_s(long s) { return (112 * s + 39) / 25; }

long compute_n4_direct(long s) {
  if (s < 1) throw std::invalid_argument("n4 needs s >= 1");
  const BigInt target = a4(s);
  long lo = 4 * (s + 1);
  if (b4(lo, s) >= target) return lo;
  long hi = 5 * s + 10;
  while (b4(hi, s) < target) hi *= 2;
  // b4(lo) < target <= b4(hi)
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (b4(mid, s) >= target ? hi : lo) = mid;
  }
  return hi;
}

Poly residue_polynomial(int a) {
  const long ma = m_of_s(a);
  const Poly s = Poly::linear(25, a);
  const Poly m = Poly::linear(112, ma);
  return Poly::binomial(m, 4) - Poly::binomial(m - s, 4) - Poly::binomial(s * Rational(4) + Poly::constant(3), 4);
}

const std::vector<long>& expected_residue_table() {
  static const std::vector<long> t = {3025, 2401, 2977, 2353, 2929, 3505, 2881, 3457, 2833, 3409, 2785, 3361, 2737,
                                      3313, 2689, 3265, 2641, 3217, 2593, 3169, 2545, 3121, 2497, 3073, 2449};
  return t;
}

ResidueReport verify_residue_classes(long cross_check_max) {
  ResidueReport rep;
  rep.cross_check_max = cross_check_max;
  constexpr long kShiftCap = 100000;
  for (int a = 0; a < 25; ++a) {
    ResidueClassResult r;
    r.a = a;
    r.poly = residue_polynomial(a);
    r.integer_valued = r.poly.integer_valued();
    long last_neg = -1;
    long t = 0;
    for (;; ++t) {
      if (t > kShiftCap) throw ResourceError("residue class tail search exceeded cap");
      if (r.poly(Rational(t)) < 0) last_neg = t;
      if (t > last_neg) {
        Poly sh = r.poly.shift(Rational(t));
        if (sh.coefficients_nonnegative()) {
          r.shifted = sh;
          break;
        }
      }
    }
    r.tail_shift_u = t;
    r.first_valid_s = a + 25 * (last_neg + 1);
    rep.last_failure = std::max(rep.last_failure, r.first_valid_s - 25);
    rep.classes.push_back(r);
  }
  rep.table_matches = true;
  for (int a = 0; a < 25; ++a)
    if (rep.classes[static_cast<std::size_t>(a)].first_valid_s != expected_residue_table()[static_cast<std::size_t>(a)])
      rep.table_matches = false;

  // Direct oracle: the inequality 25(n4 - 4s - 3) <= 12(s - 3) is n4 <= m(s).
  for (long s = 2; s <= cross_check_max; ++s) {
    const long n4 = compute_n4_direct(s);
    const bool holds = n4 <= m_of_s(s);
    if (!holds) rep.direct_last_failure = s;
    const long m = m_of_s(s);
    if (m >= 4 * (s + 1)) {
      const bool poly_nonneg = b4(m, s) >= a4(s);
      const auto& cls = rep.classes[static_cast<std::size_t>(s % 25)];
      const bool via_poly = cls.poly(Rational((s - s % 25) / 25)) >= 0;
      if (poly_nonneg != holds || via_poly != holds) rep.disagreements.push_back(s);
    }
  }
  bool all_integer = true;
  for (const auto& c : rep.classes) all_integer = all_integer && c.integer_valued;
  rep.ok = rep.table_matches && rep.last_failure == 3480 && rep.disagreements.empty() && all_integer &&
           (cross_check_max < 3480 || rep.direct_last_failure == 3480);
  return rep;
}

namespace {

Poly2 delta2() {
  const Poly2 N = Poly2::x(), s = Poly2::y();
  return Poly2::binomial(N, 4) - Poly2::binomial(N - s, 4) - Poly2::binomial(s * Rational(4) + Poly2::constant(3), 4);
}

Poly2 stated_gap_polynomial() {
  auto t = [](long c, int i, int j) { return Poly2::monomial(Rational(c), i, j); };
  return t(-1, 3, 0) + t(-3, 2, 1) + t(9, 2, 0) + t(3, 1, 2) + t(12, 1, 1) + t(-26, 1, 0) + t(255, 0, 3) +
         t(-102, 0, 2) + t(45, 0, 1) + t(18, 0, 0);
}

}  // namespace

Poly2 gap_polynomial() {
  const Poly2 d = delta2();
  const Poly2 shifted = d.substitute(Poly2::x() - Poly2::constant(2), Poly2::y() - Poly2::constant(1));
  return (shifted - d) * Rational(6);
}

GapReport verify_gap_and_admissibility(long numeric_lo, long numeric_hi) {
  GapReport g;
  const Poly2 G = gap_polynomial();
  g.gap_identity = G == stated_gap_polynomial();

  // dG/dN at N = 4s + 4 + v: every coefficient of the negation is >= 0 and the
  // constant is > 0, so G strictly decreases in N on N >= 4s + 4.
  const Poly2 dG = G.derivative_x();
  const Poly2 at = dG.substitute(Poly2::y() * Rational(4) + Poly2::constant(4) + Poly2::x(), Poly2::y());
  const Poly2 neg = at * Rational(-1);
  g.gap_decreasing_in_n = neg.coefficients_nonnegative() && neg(0, 0) > 0;

  const Poly bound_point = Poly::linear(Rational(112, 25), Rational(39, 25));
  g.bound_point_admissible = (bound_point - Poly::linear(4, 4)).shift(6).coefficients_nonnegative();

  const Poly sub = G.restrict_x(bound_point);
  const Poly stated = Poly({Rational(-69594), Rational(516094), Rational(18927), Rational(1848647)}) * Rational(1, 15625);
  g.substitution_bound = sub == stated;
  g.substitution_positive = stated.shift(1).coefficients_nonnegative() && stated(1) > 0;

  const Poly s = Poly::x();
  const Poly adm = Poly::binomial(s * Rational(4) + Poly::constant(3), 4) -
                   (Poly::binomial(s * Rational(4) + Poly::constant(4), 4) -
                    Poly::binomial(s * Rational(3) + Poly::constant(4), 4));
  const Poly adm_stated = s * (s - Poly::constant(1)) *
                          Poly({Rational(26), Rational(95), Rational(81)}) * Rational(1, 24);
  g.admissibility_identity = adm == adm_stated;
  g.admissibility_positive = adm_stated.shift(2).coefficients_nonnegative() && adm_stated(2) > 0;

  g.numeric_lo = numeric_lo;
  g.numeric_hi = numeric_hi;
  g.numeric_gap = true;
  long prev = compute_n4_direct(numeric_lo - 1);
  for (long t = numeric_lo; t <= numeric_hi; ++t) {
    const long cur = compute_n4_direct(t);
    if (cur - prev < 2) g.numeric_gap = false;
    prev = cur;
  }
  g.numeric_admissible = true;
  for (long t = 2; t <= numeric_hi; t += (t < 200 ? 1 : 37))
    if (compute_n4_direct(t) <= 4 * t + 4) g.numeric_admissible = false;
  return g;
}

Rational trace_weight(long q, long s, int trace_size, int spread) {
  return Rational(binomial(BigInt(q), 4 - trace_size), binomial(BigInt(s - spread), 4 - spread));
}

const std::vector<WeightBound>& weight_bounds() {
  static const std::vector<WeightBound> list = [] {
    const Poly one = Poly::constant(1);
    const Poly s_minus3 = Poly::linear(1, -3);
    const Poly c_s2_2 = Poly::binomial(Poly::linear(1, -2), 2);
    return std::vector<WeightBound>{
        {"T3", 3, 3, one, 1, {{0, 3}}, Rational(12, 25)},
        {"P2", 2, 2, one, 1, {{0, 3}, {1, 2}}, Rational(144, 625)},
        {"T2", 3, 2, s_minus3, 2, {{0, 2}}, Rational(24, 25)},
        {"P1", 2, 1, s_minus3, 3, {{0, 1}, {1, 2}}, Rational(432, 625)},
        {"T1", 3, 1, c_s2_2, 3, {{0, 1}}, Rational(36, 25)},
        {"P0", 2, 0, c_s2_2, 6, {{0, 0}, {1, 1}}, Rational(864, 625)},
    };
  }();
  return list;
}

WeightReport verify_weight_estimates() {
  WeightReport w;
  const Poly2 q = Poly2::x(), s = Poly2::y();
  auto lift = [](const Poly& p) {
    Poly2 r;
    for (int i = 0; i <= p.degree(); ++i) r = r + Poly2::monomial(p.coeff(i), 0, i);
    return r;
  };
  const Rational ratio(12, 25);
  w.identities = w.chains = w.constants = true;
  for (const auto& b : weight_bounds()) {
    ++w.bounds_checked;
    Poly2 num = Poly2::constant(b.constant), den = Poly2::constant(1);
    Rational power = 1;
    for (auto [k, j] : b.factors) {
      num = num * (q - Poly2::constant(k));
      den = den * (s - Poly2::constant(j));
      power *= ratio;
      // (12/25)(s-j) - (q-k) = [(12/25)(s-3) - q] + (12/25)(3-j) + k
      if (k < 0 || j > 3) w.chains = false;
    }
    // C(q, 4-|H|) * scale * den == num * C(s-z, 4-z)
    const Poly2 lhs = Poly2::binomial(q, 4 - b.trace_size) * lift(b.scale) * den;
    const Poly2 rhs = num * Poly2::binomial(s - Poly2::constant(b.spread), 4 - b.spread);
    if (!(lhs == rhs)) w.identities = false;
    if (b.constant * power != b.bound) w.constants = false;
  }

  w.spot_checks = true;
  for (long sv : {3481L, 4000L, 6961L}) {
    const long n4 = compute_n4_direct(sv);
    for (long n : {n4 - 1, n4}) {
      const long qv = n - (4 * sv + 3);
      if (qv < 0 || Rational(qv, sv - 3) > ratio) w.spot_checks = false;
      for (const auto& b : weight_bounds()) {
        const Rational val = trace_weight(qv, sv, b.trace_size, b.spread) * b.scale(Rational(sv));
        if (val > b.bound) w.spot_checks = false;
      }
    }
  }
  w.layer2_triple = Rational(2) * Rational(12, 25);
  w.layer2_pair = Rational(3) * Rational(144, 625);
  w.layer3_triple = Rational(3) * Rational(12, 25);
  w.layer3_pair = Rational(6) * Rational(144, 625);
  return w;
}

namespace {

// rho^4 - (rho-1)^4 - 256 changes sign across [4.479166855, 4.479166857].
bool rho_bracket_ok() {
  auto f = [](const Rational& r) {
    const Rational r1 = r - 1;
    return r * r * r * r - r1 * r1 * r1 * r1 - 256;
  };
  return f(Rational(4479166855, 1000000000)) < 0 && f(Rational(4479166857, 1000000000)) > 0;
}

}  // namespace

ThresholdReport run_threshold_checks(long cross_check_max) {
  ThresholdReport r;
  r.residues = verify_residue_classes(cross_check_max);
  r.gap = verify_gap_and_admissibility(3481, std::max(3481L, cross_check_max));
  r.weights = verify_weight_estimates();
  const long big = 100000;
  const long n = compute_n4_direct(big);
  const Rational dev = Rational(n) - Rational(4479166856, 1000000000) * big;
  r.rho_sanity = rho_bracket_ok() && dev < Rational(big, 1000) && dev > -Rational(big, 1000);
  r.explicit_threshold_ok = r.residues.ok;
  r.symbolic_ok = r.gap.ok() && r.weights.ok() && r.rho_sanity;
  if (r.explicit_threshold_ok && r.symbolic_ok) {
    r.S4 = r.residues.last_failure + 1;
    r.s4 = 2 * r.S4 - 1;
  }
  return r;
}

}  // namespace emc4
