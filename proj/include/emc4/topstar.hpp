#pragma once

// Linear relaxations of the top-star branch (the 27 cells {1,2,3}^3 x {3} all
// missing) and their Farkas certificates for
//   625 c - 625 l + 300 |T3| + 144 |P2| <= 40000.
//
// Variables (608): y_x present top-slice quads (x in [4]^3), m_{x,t} missing
// lower quads (t in {0,1,2}), t_{I,v} present triple traces, p_{J,u} present
// pair traces. Rows are identified by "family:params" and can be rebuilt from
// the identifier alone.

#include <optional>
#include <string>
#include <vector>

#include "emc4/exact_lp.hpp"
#include "emc4/lattice.hpp"

namespace emc4 {

struct TopstarBranch {
  int c = 0;
  int ell = -1;  // fixed lower missing count, only for c = 23

  bool has_ell() const { return ell >= 0; }
  bool valid() const;
  std::string id() const;  // "c=5" or "c=23,l=4"

  friend bool operator==(const TopstarBranch&, const TopstarBranch&) = default;
};

/// c in 0..37 except 23, then (23, l) for l in 0..25.
std::vector<TopstarBranch> topstar_branches();
TopstarBranch parse_topstar_branch(const std::string& id);

inline constexpr int kTopstarVariables = 608;
inline constexpr long long kTopstarBound = 40000;
inline constexpr const char* kTopstarGenerator = "topstar";

int topstar_y(int x);
int topstar_m(int x, int t);
int topstar_t(int support, int v);
int topstar_p(int support, int u);
/// Trace behind a t or p variable.
SupportedTrace topstar_trace(int var);

/// Cells of [4]^3 with a zero coordinate (37 of them).
const std::vector<int>& zero_cells();

/// Rebuilds a row from its metadata; throws std::invalid_argument when the
/// parameters do not describe a row of the relaxation.
LinearRow topstar_row(const RowMeta& meta);
/// Parses "family:p1,p2,..." into metadata.
RowMeta parse_topstar_row_id(const std::string& id);
/// Registers topstar_row with the row-regeneration registry.
void register_topstar_generator();

/// Unit rows from principal-ideal sizes: absent/present forcing for y, and
/// for m when l is fixed.
std::vector<LinearRow> ideal_forcing_rows(int c, std::optional<int> ell = std::nullopt);

/// Variables, objective, bound and every row except the lazy families
/// (closure, bad triple, residual seed).
RationalSystem build_relaxation(const TopstarBranch& branch);

/// Lazy families, evaluated from a compact precomputed list.
class TopstarSeparator : public RowSeparator {
 public:
  std::vector<LinearRow> violated(const std::vector<double>& x, double tol, int max_rows) const override;
  std::vector<LinearRow> violated_exact(const std::vector<Rational>& x, int max_rows) const override;
};

struct TopstarRowCounts {
  long long eager = 0;
  long long closure = 0;
  long long bad_triple = 0;
  long long residual_seed = 0;
  long long total() const { return eager + closure + bad_triple + residual_seed; }
};
TopstarRowCounts topstar_row_counts(const TopstarBranch& branch);

/// Metadata of every row of the branch relaxation, lazy families included.
std::vector<RowMeta> all_topstar_rows(const TopstarBranch& branch);

/// Families of rows violated by an exact point (all families, lazy included).
std::vector<std::string> violated_topstar_families(const TopstarBranch& branch, const std::vector<Rational>& x);

struct TopstarBranchResult {
  TopstarBranch branch;
  LpStatus status = LpStatus::Certified;
  FarkasCertificate certificate;
  bool verified = false;
  bool rows_regenerated = false;
  Rational gap = 0;
  int materialized_rows = 0;
  int generated_rows = 0;
  long long iterations = 0;
  bool ok() const { return status == LpStatus::Certified && verified && rows_regenerated && gap >= 0; }
};

TopstarBranchResult run_topstar_branch(const TopstarBranch& branch);

/// Independent check of a stored certificate: every row is rebuilt from its
/// identifier, then the Farkas inequalities are recomputed.
TopstarBranchResult verify_topstar_certificate(const TopstarBranch& branch, const FarkasCertificate& cert);

struct TopstarReport {
  std::vector<TopstarBranchResult> branches;
  bool all_ok = false;
  Rational min_gap = 0;
};

TopstarReport run_all_topstar(int workers = 1);
/// Results in the order given.
TopstarReport run_topstar_branches(const std::vector<TopstarBranch>& branches, int workers = 1);

}  // namespace emc4
