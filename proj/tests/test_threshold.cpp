#include <gtest/gtest.h>

#include "emc4/threshold.hpp"

using namespace emc4;

TEST(Poly, ArithmeticAndShift) {
  const Poly x = Poly::x();
  const Poly p = x * x - Poly::constant(3) * Rational(1) ;
  EXPECT_EQ(p(Rational(2)), 1);
  EXPECT_EQ(p.shift(1), x * x + x * Rational(2) - Poly::constant(2));
  EXPECT_EQ(p.derivative(), x * Rational(2));
  EXPECT_TRUE(Poly::binomial(x, 4).integer_valued());
  EXPECT_FALSE((x * Rational(1, 2)).integer_valued());
  EXPECT_EQ(Poly::binomial(x, 4)(Rational(10)), 210);
}

TEST(Poly2, BinomialMatchesIntegers) {
  const Poly2 b = Poly2::binomial(Poly2::x() - Poly2::y(), 4);
  EXPECT_EQ(b(Rational(12), Rational(2)), 210);
}

TEST(N4, SmallValueByHand) {
  // C(11,4) = 330; C(12,4)-C(10,4) = 285 < 330; C(13,4)-C(11,4) = 385.
  EXPECT_EQ(a4(2), 330);
  EXPECT_EQ(b4(12, 2), 285);
  EXPECT_EQ(b4(13, 2), 385);
  EXPECT_EQ(compute_n4_direct(2), 13);
}

TEST(N4, LinearScanAgreesWithBinarySearch) {
  for (long s = 1; s <= 300; ++s) {
    long n = 4 * (s + 1);
    while (b4(n, s) < a4(s)) ++n;
    ASSERT_EQ(compute_n4_direct(s), n) << s;
  }
}

TEST(N4, AdmissibleForSmallS) {
  for (long s = 2; s <= 500; ++s) EXPECT_GT(compute_n4_direct(s), 4 * s + 4) << s;
}

TEST(N4, AsymptoticRatio) {
  const long s = 100000;
  const double ratio = static_cast<double>(compute_n4_direct(s)) / s;
  EXPECT_NEAR(ratio, 4.479166856, 1e-3);
}

TEST(Residue, PolynomialMatchesDirectEvaluation) {
  for (int a = 0; a < 25; ++a) {
    const Poly p = residue_polynomial(a);
    EXPECT_EQ(p.degree(), 4);
    EXPECT_TRUE(p.integer_valued());
    for (long u = 0; u < 10; ++u) {
      const long s = a + 25 * u;
      if (s < 2) continue;
      const long m = m_of_s(s);
      EXPECT_EQ(p(Rational(u)), Rational(b4(m, s) - a4(s))) << a << " " << u;
    }
  }
}

TEST(Residue, TableAndLastFailure) {
  const auto rep = verify_residue_classes(5000);
  ASSERT_EQ(rep.classes.size(), 25u);
  EXPECT_EQ(rep.classes[0].first_valid_s, 3025);
  EXPECT_EQ(rep.classes[5].first_valid_s, 3505);
  EXPECT_EQ(rep.classes[24].first_valid_s, 2449);
  EXPECT_TRUE(rep.table_matches);
  EXPECT_EQ(rep.last_failure, 3480);
  EXPECT_EQ(rep.direct_last_failure, 3480);
  EXPECT_TRUE(rep.disagreements.empty());
  EXPECT_TRUE(rep.ok);
  for (const auto& c : rep.classes) {
    EXPECT_TRUE(c.shifted.coefficients_nonnegative());
    EXPECT_EQ(c.shifted, c.poly.shift(Rational(c.tail_shift_u)));
  }
}

TEST(Residue, TargetInequalityDirectlyAboveThreshold) {
  for (long s = 3481; s <= 5000; ++s) EXPECT_LE(25 * (compute_n4_direct(s) - 4 * s - 3), 12 * (s - 3)) << s;
  EXPECT_GT(25 * (compute_n4_direct(3480) - 4 * 3480 - 3), 12 * (3480 - 3));
}

TEST(Gap, Identities) {
  const auto g = verify_gap_and_admissibility(3481, 3600);
  EXPECT_TRUE(g.gap_identity);
  EXPECT_TRUE(g.gap_decreasing_in_n);
  EXPECT_TRUE(g.bound_point_admissible);
  EXPECT_TRUE(g.substitution_bound);
  EXPECT_TRUE(g.substitution_positive);
  EXPECT_TRUE(g.admissibility_identity);
  EXPECT_TRUE(g.admissibility_positive);
  EXPECT_TRUE(g.numeric_gap);
  EXPECT_TRUE(g.numeric_admissible);
}

TEST(Gap, EvaluatedPointwise) {
  const Poly2 G = gap_polynomial();
  for (long s : {5L, 17L, 3481L})
    for (long N : {4 * s + 4, 4 * s + 11, 5 * s}) {
      auto delta = [](long n, long t) { return Rational(b4(n, t) - a4(t)); };
      EXPECT_EQ(G(Rational(N), Rational(s)), (delta(N - 2, s - 1) - delta(N, s)) * 6);
    }
}

TEST(Gap, AdmissibilityAtTwo) { EXPECT_EQ(2 * 1 * (81 * 4 + 95 * 2 + 26), 1080); }

TEST(Weights, AllSixBounds) {
  const auto w = verify_weight_estimates();
  EXPECT_EQ(w.bounds_checked, 6);
  EXPECT_TRUE(w.identities);
  EXPECT_TRUE(w.chains);
  EXPECT_TRUE(w.constants);
  EXPECT_TRUE(w.spot_checks);
  EXPECT_EQ(w.layer2_triple, Rational(24, 25));
  EXPECT_EQ(w.layer2_pair, Rational(432, 625));
  EXPECT_EQ(w.layer3_triple, Rational(36, 25));
  EXPECT_EQ(w.layer3_pair, Rational(864, 625));
}

TEST(Weights, FormulaExamples) {
  EXPECT_EQ(trace_weight(10, 100, 3, 3), Rational(10, 97));
  EXPECT_EQ(trace_weight(10, 100, 2, 2), Rational(45, 4753));
}

TEST(Threshold, FinalConstants) {
  const auto r = run_threshold_checks(5000);
  EXPECT_TRUE(r.explicit_threshold_ok);
  EXPECT_TRUE(r.symbolic_ok);
  EXPECT_EQ(r.S4, 3481);
  EXPECT_EQ(r.s4, 6961);
}
