#pragma once

// Sparse rational inequality systems A x <= b over the box 0 <= x <= 1, a
// certificate-producing LP solver with lazy row generation, and an
// independent Farkas certificate checker.

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emc4/rational.hpp"

namespace emc4 {

/// Enough information to rebuild a row from its owning generator.
struct RowMeta {
  std::string generator;
  std::string family;
  std::vector<int> params;

  friend bool operator==(const RowMeta&, const RowMeta&) = default;
};

struct LinearRow {
  std::string id;
  std::vector<std::pair<int, Rational>> coeffs;  // sorted by column, no zeros
  Rational rhs;
  std::string tag;
  RowMeta meta;
};

/// Sorts by column, merges repeated columns and drops zeros.
std::vector<std::pair<int, Rational>> normalize_coeffs(std::vector<std::pair<int, Rational>> coeffs);

class RationalSystem {
 public:
  int add_variable(const std::string& name);
  int variable_index(const std::string& name) const;
  int variable_count() const { return static_cast<int>(names_.size()); }
  const std::string& variable_name(int j) const { return names_.at(static_cast<std::size_t>(j)); }

  void set_objective(int j, const Rational& v);
  const std::vector<Rational>& objective() const { return objective_; }
  void set_bound(const Rational& b) { bound_ = b; }
  const Rational& bound() const { return bound_; }

  /// Throws std::invalid_argument on a duplicate id or an unknown column.
  int add_row(LinearRow row);
  bool has_row(const std::string& id) const { return row_index_.count(id) != 0; }
  /// Throws ProofError on an unknown id.
  const LinearRow& row(const std::string& id) const;
  const LinearRow& row_at(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
  int row_index(const std::string& id) const;
  int row_count() const { return static_cast<int>(rows_.size()); }
  const std::vector<LinearRow>& rows() const { return rows_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> name_index_;
  std::vector<Rational> objective_;
  Rational bound_ = 0;
  std::vector<LinearRow> rows_;
  std::unordered_map<std::string, int> row_index_;
};

/// Nonnegative integer multipliers over a common denominator D. For a bound
/// certificate: A^T lambda + mu >= D d and b^T lambda + sum mu <= D B. For an
/// infeasibility certificate: A^T lambda + mu >= 0 and b^T lambda + sum mu < 0.
struct FarkasCertificate {
  std::string label;
  bool infeasibility = false;
  BigInt denominator = 1;
  std::vector<std::pair<std::string, BigInt>> rows;   // row id, numerator
  std::vector<std::pair<std::string, BigInt>> upper;  // variable name, numerator
};

struct VerifyResult {
  bool ok = false;
  /// (D B - b^T lambda - sum mu) / D; for infeasibility certificates
  /// -(b^T lambda + sum mu) / D.
  Rational gap = 0;
  std::string reason;
};

/// Exact recomputation from the system and the certificate alone. Unknown
/// row ids or variable names throw ProofError.
VerifyResult verify_certificate(const RationalSystem& sys, const FarkasCertificate& cert);

/// Supplies rows that are valid for the system but not materialized yet.
class RowSeparator {
 public:
  virtual ~RowSeparator() = default;
  /// Rows with a^T x > rhs + tol, most violated first, at most max_rows.
  virtual std::vector<LinearRow> violated(const std::vector<double>& x, double tol, int max_rows) const = 0;
  virtual std::vector<LinearRow> violated_exact(const std::vector<Rational>& x, int max_rows) const = 0;
};

enum class LpStatus { Certified, BoundViolated, Infeasible };

struct SolveOptions {
  long long max_iterations = 1000000;
  int rows_per_round = 500;
  /// Skip the floating-point phase and run the exact simplex directly.
  bool exact_only = false;
};

struct LpOutcome {
  LpStatus status = LpStatus::Certified;
  FarkasCertificate certificate;    // Certified or Infeasible
  std::vector<Rational> witness;    // BoundViolated: satisfies every row, d^T x > B
  Rational witness_value = 0;
  long long iterations = 0;
  int separation_rounds = 0;
  int generated_rows = 0;
  bool used_exact_phase = false;
};

/// Maximizes d^T x over the materialized rows plus any rows the separator
/// reports; generated rows are appended to sys. Throws ResourceError when the
/// iteration cap is hit.
LpOutcome solve_with_certificate(RationalSystem& sys, const RowSeparator* separator = nullptr,
                                 const SolveOptions& opts = {});

/// d^T x for a point; the caller checks feasibility separately.
Rational objective_value(const RationalSystem& sys, const std::vector<Rational>& x);
/// Every materialized row and the box hold at x.
bool satisfies_rows(const RationalSystem& sys, const std::vector<Rational>& x);

using RowRegenerator = std::function<LinearRow(const RowMeta&)>;

/// Generators are looked up by RowMeta::generator.
void register_row_generator(const std::string& name, RowRegenerator fn);
bool has_row_generator(const std::string& name);
/// Rebuilds the row from its metadata and compares id, coefficients and rhs
/// exactly. Unknown generators throw ProofError; a generator that rejects the
/// metadata yields false.
bool regenerate_and_match(const RationalSystem& sys, const std::string& row_id);

}  // namespace emc4
