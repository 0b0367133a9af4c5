#pragma once

// The labelled 15-board residual/closure relaxation, its quotient by
// S3(D) x S3(columns) x (S2 x S2)^3, and a quotient dual certificate for
//   300 T + 144 P <= 625 M.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "emc4/board.hpp"
#include "emc4/exact_lp.hpp"

namespace emc4 {

const LocalBoard& board15();

using Perm15 = std::array<std::uint8_t, 15>;

PointSet apply(const Perm15& g, PointSet s);

struct SymmetryGroup15 {
  std::vector<Perm15> generators;
  std::vector<Perm15> elements;  // identity first
};

/// Closure of the generators: D transpositions, column swaps, and the low and
/// high flips of each column.
SymmetryGroup15 symmetry_group15();

struct GroupCheck {
  std::size_t order = 0;
  bool closed = false;
  bool inverses = false;
  bool associative = false;
  bool preserves_fixed = false;
  bool ok() const { return order == 2304 && closed && inverses && associative && preserves_fixed; }
};
GroupCheck check_group15(const SymmetryGroup15& group);

/// x_H <= sum of m_Q over the variable quads of a witness.
struct LabelledRow {
  PointSet h = 0;
  std::vector<PointSet> vars;  // sorted
  auto operator<=>(const LabelledRow&) const = default;
};

struct Witness15 {
  PointSet h = 0;
  int set_aside = -1;  // point index, pairs only
  std::array<PointSet, 3> quads{};
};

struct LabelledRows15 {
  std::vector<Witness15> witnesses;
  std::vector<LabelledRow> residual;  // distinct rows, sorted
  std::vector<std::pair<PointSet, PointSet>> closure;  // (H, Q) with H inside Q
  bool contains(const LabelledRow& row) const;
};

/// Partitions of `points` into quads that are fixed or missing variables.
std::vector<std::vector<PointSet>> residual_partitions(const LocalBoard& board, PointSet points);

LabelledRows15 regenerate_labelled_rows15();
LabelledRow witness_row(const Witness15& w);
LabelledRow apply(const Perm15& g, const LabelledRow& row);

enum class TraceKind { Triple, Pair };

struct Orbit {
  std::vector<PointSet> members;  // increasing
  PointSet representative() const { return members.front(); }
  int size() const { return static_cast<int>(members.size()); }
};

struct QuotientRow {
  TraceKind kind = TraceKind::Triple;
  int orbit = 0;
  std::vector<int> missing;  // multiset of missing-quad orbits, sorted
  auto operator<=>(const QuotientRow&) const = default;
};

struct QuotientClosureRow {
  TraceKind kind = TraceKind::Triple;
  int orbit = 0;
  int missing = 0;
  auto operator<=>(const QuotientClosureRow&) const = default;
};

struct Quotient15 {
  std::vector<Orbit> missing_orbits;
  std::vector<Orbit> triple_orbits;
  std::vector<Orbit> pair_orbits;
  std::vector<QuotientRow> residual;
  std::vector<QuotientClosureRow> closure;
  std::vector<LabelledRow> representatives;  // one labelled row per residual row

  int missing_orbit_of(PointSet q) const;
  int trace_orbit_of(PointSet h) const;
  int index_of(const QuotientRow& row) const;  // -1 when absent

  std::vector<std::int16_t> orbit_by_mask;  // -1 outside the variables
};

/// Throws ProofError when the group check fails.
Quotient15 quotient_rows15(const SymmetryGroup15& group, const LabelledRows15& rows);

/// "t3<=m1+m1+m7", "p0<=0".
std::string quotient_row_id(const QuotientRow& row);
QuotientRow parse_quotient_row_id(const std::string& id);
/// Orbit variables "t0".."t8", "p0".."p4", "m0".."m12".
std::string orbit_variable(char kind, int orbit);

inline constexpr const char* kBoard15Generator = "board15";

/// Quotient residual rows over orbit-average variables, objective scaled by
/// orbit sizes, bound 0.
RationalSystem quotient_system15(const Quotient15& q);
/// Registers the row generator that accepts only regenerated quotient rows.
void register_board15_generator();

struct Domination15 {
  bool ok = false;
  std::string reason;
  Rational min_slack = 0;  // per labelled variable, over D
  int support = 0;
};

/// Exact check that the weighted quotient rows dominate 300 T + 144 P - 625 M
/// orbit-wise. Rows are rebuilt from their ids and must be regenerated rows.
Domination15 verify_domination15(const Quotient15& q, const FarkasCertificate& cert);

struct Lift15 {
  bool ok = false;
  bool images_regenerated = false;  // every g(row) is a labelled residual row
  Rational min_slack = 0;
};

/// Expands the quotient certificate over the group into labelled rows and
/// checks the labelled coefficient vector directly.
Lift15 lift_certificate15(const SymmetryGroup15& group, const LabelledRows15& rows, const Quotient15& q,
                          const FarkasCertificate& cert);

struct Board15Report {
  std::size_t missing_variables = 0, triple_variables = 0, pair_variables = 0;
  std::size_t witnesses = 0, distinct_residual_rows = 0, closure_rows = 0;
  std::size_t quotient_residual_rows = 0, quotient_closure_rows = 0;
  std::size_t missing_orbits = 0, triple_orbits = 0, pair_orbits = 0;
  GroupCheck group;
  bool counts_ok = false;
  FarkasCertificate certificate;
  VerifyResult farkas;
  bool rows_regenerated = false;
  Domination15 domination;
  Lift15 lift;
  LayerAssembly layer;
  bool ok() const {
    return counts_ok && group.ok() && farkas.ok && rows_regenerated && domination.ok && lift.ok;
  }
};

/// Regenerates, quotients, solves the quotient dual and verifies it.
Board15Report run_board15();

/// Verifies a stored certificate against freshly regenerated rows.
Board15Report verify_board15_certificate(const FarkasCertificate& cert);

}  // namespace emc4
