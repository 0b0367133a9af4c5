#pragma once

// The run-all pipeline: each check either discovers and writes its artifacts
// (full mode) or re-verifies the stored ones (fast mode), then reports markers.
//
// Output layout under RunConfig::out:
//   certificates/topstar.json, certificates/board15.json, certificates/board11.json
//   transcripts/notopstar.json, tables/board15_quotient.json
//   reports/<check>.json, summary.json, MANIFEST.sha256

#include <filesystem>
#include <string>
#include <vector>

#include "emc4/certificate_io.hpp"
#include "emc4/topstar.hpp"

namespace emc4 {

enum class RunMode { Full, Fast };

struct RunConfig {
  RunMode mode = RunMode::Full;
  int workers = 1;
  std::filesystem::path out = "emc4-out";
  /// Empty means all 63 branches.
  std::vector<TopstarBranch> topstar_branches;
};

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"pair-ferrers", "triple-ferrers", "topstar", "notopstar",
                                              "board15",      "board11",        "threshold"};
  return names;
}

/// "True" / "False", the spelling of the audit markers.
std::string marker_bool(bool b);

CheckReport check_pair_ferrers();
CheckReport check_triple_ferrers();
CheckReport check_topstar(const RunConfig& cfg);
CheckReport check_notopstar(const RunConfig& cfg);
CheckReport check_board15(const RunConfig& cfg);
CheckReport check_board11(const RunConfig& cfg);
CheckReport check_threshold();

/// Runs one check by name. ProofError and SchemaError become a failed report;
/// other ResourceErrors propagate.
CheckReport run_check(const std::string& name, const RunConfig& cfg);

Json board15_tables_json();

struct RunAllReport {
  std::vector<CheckReport> checks;
  std::vector<std::string> manifest_problems;  // fast mode: stored tree vs manifest
  bool resource_error = false;
  std::string resource_message;
  bool ok() const;
  int exit_code() const;  // 0 ok, 1 proof failure, 2 configuration or resource error
};

/// Runs every check on a pool of cfg.workers threads, writes reports, the
/// summary and a fresh manifest.
RunAllReport run_all(const RunConfig& cfg);

}  // namespace emc4
