#pragma once

// Explicit critical estimates for r = 4: residue classes mod 25, the gap and
// admissibility identities, the six weight bounds, and the final constants.

#include <string>
#include <vector>

#include "emc4/polynomial.hpp"
#include "emc4/rational.hpp"

namespace emc4 {

BigInt a4(long s);           // C(4s+3, 4)
BigInt b4(long n, long s);   // C(n,4) - C(n-s,4)
/// floor((112 s + 39) / 25)
long m_of_s(long s);
/// Least n >= 4(s+1) with b4(n, s) >= a4(s), by exact binary search.
long compute_n4_direct(long s);

/// C(m,4) - C(m-s,4) - C(4s+3,4) at s = a + 25u, m = m(s), as a polynomial in u.
Poly residue_polynomial(int a);

struct ResidueClassResult {
  int a = 0;
  Poly poly;            // in u
  long first_valid_s = 0;
  long tail_shift_u = 0;  // poly(tail_shift_u + v) has nonnegative coefficients
  Poly shifted;
  bool integer_valued = false;
};

struct ResidueReport {
  std::vector<ResidueClassResult> classes;
  long last_failure = 0;
  long direct_last_failure = 0;   // from compute_n4_direct over the cross-check range
  long cross_check_max = 0;
  std::vector<long> disagreements;  // s where polynomial sign and direct oracle disagree
  bool table_matches = false;
  bool ok = false;
};

/// Expected first valid representative of each residue class.
const std::vector<long>& expected_residue_table();

ResidueReport verify_residue_classes(long cross_check_max = 5000);

struct GapReport {
  bool gap_identity = false;
  bool gap_decreasing_in_n = false;
  bool bound_point_admissible = false;  // (112s+39)/25 >= 4s+4 for s >= 6
  bool substitution_bound = false;
  bool substitution_positive = false;
  bool admissibility_identity = false;
  bool admissibility_positive = false;
  long numeric_lo = 0, numeric_hi = 0;
  bool numeric_gap = false;          // n4(s) - n4(s-1) >= 2 on [lo, hi]
  bool numeric_admissible = false;   // n4(s) > 4s + 4 on [2, hi]
  bool ok() const {
    return gap_identity && gap_decreasing_in_n && bound_point_admissible && substitution_bound &&
           substitution_positive && admissibility_identity && admissibility_positive && numeric_gap &&
           numeric_admissible;
  }
};

/// 6(D_{s-1}(N-2) - D_s(N)) as a polynomial in (N, s).
Poly2 gap_polynomial();

GapReport verify_gap_and_admissibility(long numeric_lo = 3481, long numeric_hi = 5000);

/// w(H) = C(q, 4-|H|) / C(s-z, 4-z)
Rational trace_weight(long q, long s, int trace_size, int spread);

struct WeightBound {
  std::string name;
  int trace_size = 0;
  int spread = 0;
  Poly scale;                      // in s
  Rational constant;               // c in c * prod (q-k)/(s-j)
  std::vector<std::pair<int, int>> factors;  // (k, j)
  Rational bound;
};

const std::vector<WeightBound>& weight_bounds();

struct WeightReport {
  int bounds_checked = 0;
  bool identities = false;   // w(H) * scale == chain, symbolically
  bool chains = false;       // every factor (q-k)/(s-j) <= 12/25 under q/(s-3) <= 12/25
  bool constants = false;    // c * (12/25)^len == bound
  bool spot_checks = false;  // at s in {3481, 4000, 6961}, n in {n4-1, n4}
  Rational layer2_triple, layer2_pair, layer3_triple, layer3_pair;
  bool ok() const { return identities && chains && constants && spot_checks; }
};

WeightReport verify_weight_estimates();

struct ThresholdReport {
  ResidueReport residues;
  GapReport gap;
  WeightReport weights;
  bool rho_sanity = false;
  long S4 = 0;
  long s4 = 0;
  bool explicit_threshold_ok = false;
  bool symbolic_ok = false;
};

ThresholdReport run_threshold_checks(long cross_check_max = 5000);

}  // namespace emc4
