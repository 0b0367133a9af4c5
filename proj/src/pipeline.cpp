#include "emc4/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "emc4/board11.hpp"
#include "emc4/board15.hpp"
#include "emc4/ferrers_audit.hpp"
#include "emc4/manifest.hpp"
#include "emc4/notopstar.hpp"
#include "emc4/threshold.hpp"

namespace emc4 {

namespace fs = std::filesystem;

namespace {

const char* kTopstarCert = "certificates/topstar.json";
const char* kBoard15Cert = "certificates/board15.json";
const char* kBoard11Cert = "certificates/board11.json";
const char* kNoTopstarTranscript = "transcripts/notopstar.json";
const char* kBoard15Tables = "tables/board15_quotient.json";

CheckReport start(const std::string& name) {
  CheckReport r;
  r.name = name;
  return r;
}

void finish(CheckReport& r, bool ok, const std::string& reason = {}) {
  r.status = ok ? CheckStatus::Ok : CheckStatus::Failed;
  if (!ok && r.reason.empty()) r.reason = reason.empty() ? "check failed" : reason;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ResourceError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<TopstarBranch> branches_of(const RunConfig& cfg) {
  return cfg.topstar_branches.empty() ? topstar_branches() : cfg.topstar_branches;
}

// Stored artifacts are compared byte for byte against a fresh canonical dump.
bool matches_stored(const fs::path& path, const Json& fresh) { return read_bytes(path) == canonical_dump(fresh); }

}  // namespace

std::string marker_bool(bool b) { return b ? "True" : "False"; }

CheckReport check_pair_ferrers() {
  CheckReport r = start("pair-ferrers");
  const PairAuditReport a = audit_pairs();
  r.markers["pair_ferrers_downsets_checked"] = std::to_string(a.downsets_checked);
  r.markers["pair_ferrers_legal_downsets"] = std::to_string(a.legal_count);
  r.markers["pair_ferrers_max_legal_size"] = std::to_string(a.max_legal_size);
  finish(r, a.downsets_checked == 70 && a.legal_count == 10 && a.max_legal_size == 4,
         "pair Ferrers counts differ from (70, 10, 4)");
  return r;
}

CheckReport check_triple_ferrers() {
  CheckReport r = start("triple-ferrers");
  const TripleAuditReport a = audit_triples();
  const BigInt oracle = macmahon_box_count(4, 4, 4);
  r.markers["triple_ferrers_downsets_checked"] = std::to_string(a.downsets_checked);
  r.markers["triple_ferrers_bad_matchings"] = std::to_string(a.bad_matchings);
  r.markers["triple_ferrers_legal_downsets"] = std::to_string(a.legal_count);
  r.markers["triple_ferrers_max_legal_size"] = std::to_string(a.max_legal_size);
  r.markers["triple_ferrers_equality_diagrams"] = std::to_string(a.equality_diagrams.size());
  r.markers["triple_ferrers_macmahon_count"] = oracle.str();
  finish(r,
         a.downsets_checked == 232848 && BigInt(a.downsets_checked) == oracle && a.bad_matchings == 2016 &&
             a.legal_count == 26893 && a.max_legal_size == 32 && a.equality_diagrams.size() == 4,
         "triple Ferrers counts differ from (232848, 2016, 26893, 32, 4)");
  return r;
}

CheckReport check_topstar(const RunConfig& cfg) {
  CheckReport r = start("topstar");
  const auto branches = branches_of(cfg);
  r.artifacts.push_back(kTopstarCert);
  std::vector<TopstarBranchResult> results;
  std::string problem;
  if (cfg.mode == RunMode::Full) {
    TopstarReport rep = run_topstar_branches(branches, cfg.workers);
    std::vector<FarkasCertificate> certs;
    for (const auto& b : rep.branches) certs.push_back(b.certificate);
    write_json(cfg.out / kTopstarCert, certificate_bundle_to_json(certs));
    results = std::move(rep.branches);
  } else {
    register_topstar_generator();
    const auto certs = certificate_bundle_from_json(read_json(cfg.out / kTopstarCert));
    std::set<std::string> expected;
    for (const auto& b : branches) expected.insert(b.id());
    std::set<std::string> seen;
    for (const auto& c : certs) {
      TopstarBranch b;
      try {
        b = parse_topstar_branch(c.label);
      } catch (const std::invalid_argument&) {
        if (problem.empty()) problem = "certificate with unknown branch label " + c.label;
        continue;
      }
      if (!expected.count(b.id()) || !seen.insert(b.id()).second) {
        if (problem.empty()) problem = "unexpected or repeated branch " + c.label;
        continue;
      }
      results.push_back(verify_topstar_certificate(b, c));
    }
    for (const auto& id : expected) {
      if (!seen.count(id) && problem.empty()) problem = "missing certificate for branch " + id;
    }
  }
  bool all_ok = problem.empty() && results.size() == branches.size();
  Rational min_gap = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& b = results[i];
    all_ok = all_ok && b.ok();
    if (i == 0 || b.gap < min_gap) min_gap = b.gap;
    r.markers["gap[" + b.branch.id() + "]"] = to_string(b.gap);
    if (!b.ok() && problem.empty()) problem = "branch " + b.branch.id() + " not certified";
  }
  r.markers["all_ok"] = marker_bool(all_ok);
  r.markers["topstar_branches"] = std::to_string(results.size());
  r.markers["topstar_min_gap"] = to_string(min_gap);
  finish(r, all_ok, problem);
  return r;
}

CheckReport check_notopstar(const RunConfig& cfg) {
  CheckReport r = start("notopstar");
  r.artifacts.push_back(kNoTopstarTranscript);
  const NoTopstarReport rep = assemble_no_topstar();
  const Json transcript = no_topstar_transcript(rep);
  bool transcript_ok = true;
  if (cfg.mode == RunMode::Full) {
    write_json(cfg.out / kNoTopstarTranscript, transcript);
  } else {
    transcript_ok = matches_stored(cfg.out / kNoTopstarTranscript, transcript);
  }
  r.markers["trace_threshold_checks"] = std::to_string(rep.trace_threshold_checks);
  r.markers["critical_pattern_checks"] = std::to_string(rep.critical_pattern_checks);
  r.markers["rectangle_cases"] = std::to_string(rep.rectangle_cases);
  r.markers["rectangle_worst_margin"] = std::to_string(rep.worst_margin);
  r.markers["upper_blocker_max_present"] = std::to_string(rep.blocker.max_present);
  r.markers["upper_blocker_min_blocker"] = std::to_string(rep.blocker.min_blocker);
  r.markers["exact_upper_blocker_branch_bound_ok"] = marker_bool(rep.blocker_ok);
  r.markers["exact_no_topstar_threshold_certificate_ok"] = marker_bool(rep.ok);
  r.markers["tight_case_ok"] = marker_bool(rep.tight_case_ok);
  r.markers["reference_table_match"] = marker_bool(rep.table.matches_expected);
  std::string mismatched;
  for (int m : rep.table.mismatched_m) mismatched += (mismatched.empty() ? "" : ",") + std::to_string(m);
  r.markers["reference_table_mismatched_m"] = mismatched;
  if (!transcript_ok) {
    finish(r, false, "stored transcript differs from the recomputed search");
  } else {
    finish(r, rep.ok, "no-top-star assembly failed");
  }
  return r;
}

Json board15_tables_json() {
  const auto group = symmetry_group15();
  const auto rows = regenerate_labelled_rows15();
  const Quotient15 q = quotient_rows15(group, rows);
  const LocalBoard& b = board15();
  auto orbits = [&](const std::vector<Orbit>& os, char kind) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < os.size(); ++i) {
      Json members = Json::array();
      for (PointSet s : os[i].members) members.push_back(b.label(s));
      arr.push_back({{"variable", orbit_variable(kind, static_cast<int>(i))},
                     {"size", std::to_string(os[i].size())},
                     {"members", members}});
    }
    return arr;
  };
  Json residual = Json::array();
  for (const auto& row : q.residual) residual.push_back(quotient_row_id(row));
  Json closure = Json::array();
  for (const auto& c : q.closure) {
    closure.push_back(orbit_variable(c.kind == TraceKind::Triple ? 't' : 'p', c.orbit) + "+" +
                      orbit_variable('m', c.missing) + "<=1");
  }
  return {{"kind", "board15-quotient"},
          {"missing_orbits", orbits(q.missing_orbits, 'm')},
          {"triple_orbits", orbits(q.triple_orbits, 't')},
          {"pair_orbits", orbits(q.pair_orbits, 'p')},
          {"residual_rows", residual},
          {"closure_rows", closure}};
}

CheckReport check_board15(const RunConfig& cfg) {
  CheckReport r = start("board15");
  r.artifacts = {kBoard15Cert, kBoard15Tables};
  Board15Report rep;
  bool tables_ok = true;
  const Json tables = board15_tables_json();
  if (cfg.mode == RunMode::Full) {
    rep = run_board15();
    write_json(cfg.out / kBoard15Cert, certificate_to_json(rep.certificate, "dual-cut"));
    write_json(cfg.out / kBoard15Tables, tables);
  } else {
    rep = verify_board15_certificate(certificate_from_json(read_json(cfg.out / kBoard15Cert), "dual-cut"));
    tables_ok = matches_stored(cfg.out / kBoard15Tables, tables);
  }
  r.markers["board15_ok"] = marker_bool(rep.ok());
  r.markers["board15_missing_variables"] = std::to_string(rep.missing_variables);
  r.markers["board15_triple_variables"] = std::to_string(rep.triple_variables);
  r.markers["board15_pair_variables"] = std::to_string(rep.pair_variables);
  r.markers["board15_residual_witnesses"] = std::to_string(rep.witnesses);
  r.markers["board15_closure_rows"] = std::to_string(rep.closure_rows);
  r.markers["board15_group_order"] = std::to_string(rep.group.order);
  r.markers["board15_missing_orbits"] = std::to_string(rep.missing_orbits);
  r.markers["board15_triple_orbits"] = std::to_string(rep.triple_orbits);
  r.markers["board15_pair_orbits"] = std::to_string(rep.pair_orbits);
  r.markers["board15_quotient_residual_rows"] = std::to_string(rep.quotient_residual_rows);
  r.markers["board15_quotient_closure_rows"] = std::to_string(rep.quotient_closure_rows);
  r.markers["board15_min_slack"] = to_string(rep.domination.min_slack);
  r.markers["board15_dual_support"] = std::to_string(rep.domination.support);
  r.markers["layer2_triple_coefficient"] = to_string(rep.layer.triple_coefficient);
  r.markers["layer2_pair_coefficient"] = to_string(rep.layer.pair_coefficient);
  if (!tables_ok) {
    finish(r, false, "stored quotient tables differ from the regenerated ones");
  } else {
    std::string why = rep.domination.reason;
    if (why.empty()) why = rep.farkas.reason;
    finish(r, rep.ok(), why.empty() ? "15-board certificate rejected" : why);
  }
  return r;
}

CheckReport check_board11(const RunConfig& cfg) {
  CheckReport r = start("board11");
  r.artifacts = {kBoard11Cert};
  Board11Report rep;
  if (cfg.mode == RunMode::Full) {
    rep = run_board11();
    write_json(cfg.out / kBoard11Cert, certificate_to_json(rep.certificate, "dual-cut"));
  } else {
    rep = verify_board11_certificate(certificate_from_json(read_json(cfg.out / kBoard11Cert), "dual-cut"));
  }
  r.markers["board11_ok"] = marker_bool(rep.ok());
  r.markers["board11_missing_variables"] = std::to_string(rep.missing_variables);
  r.markers["board11_triple_variables"] = std::to_string(rep.triple_variables);
  r.markers["board11_pair_variables"] = std::to_string(rep.pair_variables);
  r.markers["board11_residual_cuts"] = std::to_string(rep.cuts);
  r.markers["board11_infeasibility_cuts"] = std::to_string(rep.infeasibility_cuts);
  r.markers["board11_max_load"] = to_string(rep.domination.max_load);
  r.markers["board11_min_triple_coefficient"] = to_string(rep.domination.min_triple);
  r.markers["board11_min_pair_coefficient"] = to_string(rep.domination.min_pair);
  r.markers["board11_dual_support"] = std::to_string(rep.domination.support);
  r.markers["layer3_triple_coefficient"] = to_string(rep.layer.triple_coefficient);
  r.markers["layer3_pair_coefficient"] = to_string(rep.layer.pair_coefficient);
  std::string why = rep.domination.reason;
  if (why.empty()) why = rep.farkas.reason;
  finish(r, rep.ok(), why.empty() ? "11-board certificate rejected" : why);
  return r;
}

CheckReport check_threshold() {
  CheckReport r = start("threshold");
  const ThresholdReport t = run_threshold_checks();
  const bool ok = t.explicit_threshold_ok && t.symbolic_ok;
  r.markers["residue_table_matches"] = marker_bool(t.residues.table_matches);
  r.markers["residue_last_failure"] = std::to_string(t.residues.last_failure);
  r.markers["direct_oracle_disagreements"] = std::to_string(t.residues.disagreements.size());
  r.markers["weight_bounds_checked"] = std::to_string(t.weights.bounds_checked);
  if (ok) {
    r.markers["r4_explicit_threshold_ok"] = marker_bool(t.explicit_threshold_ok);
    r.markers["r4_symbolic_checks_ok"] = marker_bool(t.symbolic_ok);
    r.markers["r4_threshold_S4"] = std::to_string(t.S4);
    r.markers["r4_global_s4"] = std::to_string(t.s4);
  }
  finish(r, ok && t.S4 == 3481 && t.s4 == 6961, "threshold checks failed");
  return r;
}

CheckReport run_check(const std::string& name, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport r;
  try {
    if (name == "pair-ferrers") {
      r = check_pair_ferrers();
    } else if (name == "triple-ferrers") {
      r = check_triple_ferrers();
    } else if (name == "topstar") {
      r = check_topstar(cfg);
    } else if (name == "notopstar") {
      r = check_notopstar(cfg);
    } else if (name == "board15") {
      r = check_board15(cfg);
    } else if (name == "board11") {
      r = check_board11(cfg);
    } else if (name == "threshold") {
      r = check_threshold();
    } else {
      throw ResourceError("unknown check " + name);
    }
  } catch (const ProofError& e) {
    r = start(name);
    finish(r, false, e.what());
  } catch (const SchemaError& e) {
    r = start(name);
    finish(r, false, std::string("schema: ") + e.what());
  }
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool RunAllReport::ok() const {
  if (resource_error || !manifest_problems.empty()) return false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Failed) return false;
  }
  return true;
}

int RunAllReport::exit_code() const {
  if (resource_error) return 2;
  return ok() ? 0 : 1;
}

RunAllReport run_all(const RunConfig& cfg) {
  RunAllReport out;
  if (cfg.workers < 1) throw ResourceError("--workers must be at least 1");
  if (cfg.mode == RunMode::Fast) {
    if (!fs::is_directory(cfg.out)) throw ResourceError("fast mode needs an existing output directory: " + cfg.out.string());
    out.manifest_problems = verify_manifest(cfg.out).problems;
  }
  fs::create_directories(cfg.out);

  const auto& names = check_names();
  out.checks.resize(names.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= names.size()) return;
      try {
        out.checks[i] = run_check(names[i], cfg);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        out.checks[i] = start(names[i]);
        finish(out.checks[i], false, e.what());
        out.resource_error = true;
        if (out.resource_message.empty()) out.resource_message = names[i] + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min<int>(cfg.workers, static_cast<int>(names.size())); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  Json summary = {{"kind", "summary"}, {"checks", Json::object()}};
  bool all_ok = true;
  for (auto& c : out.checks) {
    write_json(cfg.out / "reports" / (c.name + ".json"), report_to_json(c));
    summary["checks"][c.name] = to_string(c.status);
    all_ok = all_ok && c.status != CheckStatus::Failed;
  }
  summary["all_checks_ok"] = marker_bool(all_ok);
  write_json(cfg.out / "summary.json", summary);
  // A tree that failed its manifest keeps the old manifest, so the failure persists.
  if (out.manifest_problems.empty()) emit_manifest(cfg.out);
  return out;
}

}  // namespace emc4
