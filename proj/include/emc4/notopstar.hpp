#pragma once

// Exact searches for the branch where the missing upper cube holds no full
// top-star: hitting clauses, the upper blocker, single-trace minima, critical
// patterns, rectangle extensions, and the final threshold assembly.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emc4/lattice.hpp"

namespace emc4 {

/// Three pairwise disjoint wide quads, sorted by cell index.
using Clause = std::array<std::uint8_t, 3>;

CellMask clause_mask(const Clause& c);

/// (3,1,1,1), (1,3,1,1), (1,1,3,1), (1,1,1,3).
const std::array<int, 4>& unit_top_cells();
/// {1,2,3}^4 as a mask.
const CellMask& upper_cube_mask();

/// The 216 clauses {(t, p1(t), p2(t), p3(t)) : t = 1,2,3}.
const std::vector<Clause>& upper_matching_clauses();

/// A seed is a present quad D + {value u in column j}, u in {0, 1}.
struct Seed {
  int column = 0;
  int value = 0;
};

/// Seeds disjoint from H that leave at least three values in every column.
std::vector<Seed> productive_seeds(const SupportedTrace& h);

/// All residual seed matchings of H: for each seed disjoint from H, three
/// pairwise disjoint wide quads avoiding H and the seed. Deduplicated and
/// sorted.
std::vector<Clause> residual_seed_clauses(const SupportedTrace& h);
/// Clauses for a single seed (no cross-seed dedup besides within the seed).
std::vector<Clause> residual_seed_clauses(const SupportedTrace& h, const Seed& seed);

/// Up-sets M with no upper 3-matching, containing the unit tops, plus the instance constraints.
struct HittingInstance {
  std::string label;
  CellMask forbidden;                 // cells that may not lie in M (down-closed on build)
  std::vector<CellMask> clauses;      // each must meet M
  bool upper_constraints = true;      // upper-matching clauses and unit tops included
  int upper_blocker_floor = 0;        // |M cap U| >= this in every solution (0 = unused)
};

/// Instance for a set of simultaneously present traces (closure + residual
/// seed hitting for each), plus optional extra cells kept out of M.
HittingInstance trace_instance(const std::vector<SupportedTrace>& present, const CellMask& extra_forbidden = {},
                               int upper_blocker_floor = 0);

struct HittingResult {
  bool feasible = false;
  int optimum = -1;       // minimum |M| when feasible
  CellMask witness;
  long long nodes = 0;
  int limit = 0;          // searched for |M| <= limit
};

/// Exact minimum |M| over up-sets M in [4]^4 with |M| <= limit that avoid the
/// forbidden cells and hit every clause.
HittingResult minimize_missing(const HittingInstance& inst, int limit = 256);

/// Checks a claimed solution directly against the instance.
bool satisfies_instance(const HittingInstance& inst, const CellMask& m);

struct UpperBlockerResult {
  int max_present = 0;
  int min_blocker = 0;
  CellMask witness_present;  // C subset of U
  long long candidates = 0;
};

/// Exhaustive search over present upper cubes C (down-sets of {1,2,3}^4 given
/// by 3x3x3 height matrices) containing the unit-top points and every cell of
/// `required_present`, with no upper 3-matching. Maximizes |C|.
UpperBlockerResult upper_blocker_minimum(const CellMask& required_present = {});

/// Orbit of a supported trace value under permutations of the four columns:
/// the sorted value multiset.
struct TraceOrbit {
  int kind = 2;                 // 2 = pair, 3 = triple
  std::vector<int> values;      // sorted, representative on support {0,1} / {0,1,2}
  int size = 0;                 // labelled traces in the orbit
  SupportedTrace representative() const;
  std::string key() const;
};

/// 10 pair orbits then 20 triple orbits.
std::vector<TraceOrbit> trace_orbits();
TraceOrbit orbit_of(const SupportedTrace& h);

struct ThresholdTable {
  std::map<std::string, int> minima;  // orbit key -> mu
  std::vector<int> p;                 // index m - 33, m in 33..63
  std::vector<int> t;
  bool matches_expected = false;
  bool within_expected = false;   // p, t pointwise <= the reference rows
  std::vector<int> mismatched_m;
  bool inequality_holds = false;
};

/// Reference (p(m), t(m)) rows for m = 33..63.
const std::vector<int>& reference_p();
const std::vector<int>& reference_t();

/// mu(H) for each of the 30 orbit representatives.
std::map<std::string, HittingResult> single_trace_minima(int upper_blocker_floor, long long* total_nodes = nullptr);
ThresholdTable combine_thresholds(const std::map<std::string, int>& minima);

struct PatternCheck {
  std::string name;
  std::string kind;   // "minimum" or "forcing"
  int expected = 0;   // expected minimum, or the |M| cap for forcing checks
  HittingResult result;
  bool ok = false;
};

/// The pair square, the three slabs, and the mixed height matrix.
std::vector<SupportedTrace> pattern_traces(const std::string& name);
std::vector<PatternCheck> critical_pattern_checks(int upper_blocker_floor);

/// R_ij = {q : q_i >= 2, q_j >= 2}.
CellMask rectangle(int i, int j);

struct RectangleCase {
  int i = 0, j = 0;
  CellMask m;
  int size = 0;
  int t3 = 0, p2 = 0;
  long long margin = 0;  // 300 T3 + 144 P2 - 625 |M|
};

/// Allowed values for a support given M: closure and full residual hitting.
/// Throws std::invalid_argument when M is not an up-set.
CellMask allowed_trace_values(const std::vector<int>& support, const CellMask& m);
/// Largest legal Ferrers shape on the support all of whose values are allowed.
int legal_downsets_with_closure(const std::vector<int>& support, const CellMask& m);

std::vector<RectangleCase> rectangle_extension_audit();

struct NoTopstarReport {
  UpperBlockerResult blocker;
  bool blocker_ok = false;
  std::map<std::string, HittingResult> minima;
  ThresholdTable table;
  std::vector<PatternCheck> patterns;
  std::vector<RectangleCase> rectangles;
  long long worst_margin = 0;
  bool c3_nonextremal_ok = false;  // 300*124 + 144*18 <= 625*64
  bool universal_ok = false;       // 300*128 + 144*24 < 625*67
  bool tight_case_ok = false;      // t(48) = 25 and 300*4*25 = 625*48
  int trace_threshold_checks = 0;
  int critical_pattern_checks = 0;
  int rectangle_cases = 0;
  bool ok = false;
};

NoTopstarReport assemble_no_topstar();

}  // namespace emc4
