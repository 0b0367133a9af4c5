// Command-line front end. Exit codes: 0 ok, 1 proof failure, 2 configuration
// or resource error.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "emc4/board11.hpp"
#include "emc4/board15.hpp"
#include "emc4/certificate_io.hpp"
#include "emc4/manifest.hpp"
#include "emc4/notopstar.hpp"
#include "emc4/pipeline.hpp"
#include "emc4/topstar.hpp"

using namespace emc4;

namespace {

void print_report(CheckReport& r, bool json) {
  if (json) {
    Json j = report_to_json(r);
    j["elapsed_ms"] = std::to_string(r.elapsed_ms);
    std::cout << canonical_dump(j);
    return;
  }
  std::cout << r.name << ": " << to_string(r.status) << " (" << r.elapsed_ms << " ms)\n";
  for (const auto& [k, v] : r.markers) std::cout << "  " << k << "=" << v << "\n";
  if (!r.reason.empty()) std::cout << "  reason: " << r.reason << "\n";
}

int status_code(const CheckReport& r) { return r.status == CheckStatus::Failed ? 1 : 0; }

template <class F>
CheckReport timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport r = f();
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

CheckReport topstar_command(const std::vector<TopstarBranch>& branches, int workers, const std::string& emit,
                            const std::string& verify) {
  CheckReport r;
  r.name = "topstar";
  std::vector<TopstarBranchResult> results;
  if (!verify.empty()) {
    register_topstar_generator();
    const Json j = read_json(verify);
    std::vector<FarkasCertificate> certs;
    if (j.is_object() && j.value("kind", "") == "farkas") {
      certs.push_back(certificate_from_json(j, "farkas"));
    } else {
      certs = certificate_bundle_from_json(j);
    }
    for (const auto& c : certs) results.push_back(verify_topstar_certificate(parse_topstar_branch(c.label), c));
    if (!branches.empty()) {
      std::erase_if(results, [&](const TopstarBranchResult& b) {
        return std::find(branches.begin(), branches.end(), b.branch) == branches.end();
      });
      if (results.size() != branches.size()) {
        r.status = CheckStatus::Failed;
        r.reason = "certificate file does not cover the requested branches";
      }
    }
    r.artifacts.push_back(verify);
  } else {
    TopstarReport rep = run_topstar_branches(branches.empty() ? topstar_branches() : branches, workers);
    results = std::move(rep.branches);
    if (!emit.empty()) {
      std::vector<FarkasCertificate> certs;
      for (const auto& b : results) certs.push_back(b.certificate);
      write_json(emit, certs.size() == 1 ? certificate_to_json(certs[0], "farkas") : certificate_bundle_to_json(certs));
      r.artifacts.push_back(emit);
    }
  }
  bool all_ok = !results.empty();
  for (const auto& b : results) {
    all_ok = all_ok && b.ok();
    r.markers["gap[" + b.branch.id() + "]"] = to_string(b.gap);
  }
  r.markers["all_ok"] = marker_bool(all_ok);
  r.markers["topstar_branches"] = std::to_string(results.size());
  if (r.status != CheckStatus::Failed) r.status = all_ok ? CheckStatus::Ok : CheckStatus::Failed;
  if (!all_ok && r.reason.empty()) r.reason = "some branch is not certified";
  return r;
}

CheckReport notopstar_command(const std::string& part, const std::string& emit, const std::string& verify) {
  CheckReport r;
  r.name = "notopstar " + part;
  if (part == "blocker") {
    const UpperBlockerResult b = upper_blocker_minimum();
    r.markers["upper_blocker_max_present"] = std::to_string(b.max_present);
    r.markers["upper_blocker_min_blocker"] = std::to_string(b.min_blocker);
    r.markers["upper_blocker_candidates"] = std::to_string(b.candidates);
    const bool ok = b.max_present == 48 && b.min_blocker == 33;
    r.markers["exact_upper_blocker_branch_bound_ok"] = marker_bool(ok);
    r.status = ok ? CheckStatus::Ok : CheckStatus::Failed;
    return r;
  }
  if (part == "hitting") {
    long long nodes = 0;
    const auto minima = single_trace_minima(33, &nodes);
    std::map<std::string, int> mu;
    for (const auto& [k, v] : minima) {
      mu[k] = v.optimum;
      r.markers["mu[" + k + "]"] = std::to_string(v.optimum);
    }
    const ThresholdTable t = combine_thresholds(mu);
    r.markers["trace_threshold_checks"] = std::to_string(minima.size());
    r.markers["search_nodes"] = std::to_string(nodes);
    r.markers["reference_table_match"] = marker_bool(t.matches_expected);
    r.markers["table_inequality_holds"] = marker_bool(t.inequality_holds);
    r.status = minima.size() == 30 && t.inequality_holds ? CheckStatus::Ok : CheckStatus::Failed;
    return r;
  }
  if (part == "patterns") {
    const auto checks = critical_pattern_checks(33);
    bool ok = checks.size() == 9;
    for (const auto& p : checks) {
      r.markers["pattern[" + p.name + "]"] = p.result.feasible ? std::to_string(p.result.optimum) : "infeasible";
      ok = ok && p.ok;
    }
    r.markers["critical_pattern_checks"] = std::to_string(checks.size());
    r.status = ok ? CheckStatus::Ok : CheckStatus::Failed;
    return r;
  }
  if (part == "rectangles") {
    const auto cases = rectangle_extension_audit();
    long long worst = cases.empty() ? 0 : cases.front().margin;
    for (const auto& c : cases) worst = std::max(worst, c.margin);
    r.markers["rectangle_cases"] = std::to_string(cases.size());
    r.markers["rectangle_worst_margin"] = std::to_string(worst);
    r.status = cases.size() == 72 && worst < 0 ? CheckStatus::Ok : CheckStatus::Failed;
    return r;
  }
  if (part != "assemble" && part != "all") throw ResourceError("unknown notopstar part " + part);
  const std::filesystem::path file = verify.empty() ? emit : verify;
  const NoTopstarReport rep = assemble_no_topstar();
  const Json transcript = no_topstar_transcript(rep);
  bool transcript_ok = true;
  if (!verify.empty()) {
    transcript_ok = canonical_dump(read_json(file)) == canonical_dump(transcript);
  } else if (!emit.empty()) {
    write_json(file, transcript);
  }
  r.name = "notopstar";
  r.markers["trace_threshold_checks"] = std::to_string(rep.trace_threshold_checks);
  r.markers["critical_pattern_checks"] = std::to_string(rep.critical_pattern_checks);
  r.markers["rectangle_cases"] = std::to_string(rep.rectangle_cases);
  r.markers["rectangle_worst_margin"] = std::to_string(rep.worst_margin);
  r.markers["exact_upper_blocker_branch_bound_ok"] = marker_bool(rep.blocker_ok);
  r.markers["exact_no_topstar_threshold_certificate_ok"] = marker_bool(rep.ok);
  r.markers["reference_table_match"] = marker_bool(rep.table.matches_expected);
  r.status = rep.ok && transcript_ok ? CheckStatus::Ok : CheckStatus::Failed;
  if (!transcript_ok) r.reason = "stored transcript differs from the recomputed search";
  return r;
}

CheckReport board_command(const std::string& which, const std::string& emit, const std::string& verify,
                          const std::string& out_dir) {
  RunConfig cfg;
  const std::string cert_rel = "certificates/" + which + ".json";
  const std::filesystem::path tmp = out_dir.empty() ? std::filesystem::path() : std::filesystem::path(out_dir);
  CheckReport r;
  if (verify.empty()) {
    cfg.mode = RunMode::Full;
    cfg.out = tmp.empty() ? std::filesystem::temp_directory_path() / ("emc4-" + which) : tmp;
    r = which == "board15" ? check_board15(cfg) : check_board11(cfg);
    if (!emit.empty()) std::filesystem::copy_file(cfg.out / cert_rel, emit, std::filesystem::copy_options::overwrite_existing);
    if (tmp.empty()) std::filesystem::remove_all(cfg.out);
  } else {
    const FarkasCertificate cert = certificate_from_json(read_json(verify), "dual-cut");
    r.name = which;
    if (which == "board15") {
      const Board15Report rep = verify_board15_certificate(cert);
      r.markers["board15_ok"] = marker_bool(rep.ok());
      r.markers["board15_min_slack"] = to_string(rep.domination.min_slack);
      r.status = rep.ok() ? CheckStatus::Ok : CheckStatus::Failed;
      r.reason = rep.ok() ? "" : rep.domination.reason + rep.farkas.reason;
    } else {
      const Board11Report rep = verify_board11_certificate(cert);
      r.markers["board11_ok"] = marker_bool(rep.ok());
      r.markers["board11_max_load"] = to_string(rep.domination.max_load);
      r.status = rep.ok() ? CheckStatus::Ok : CheckStatus::Failed;
      r.reason = rep.ok() ? "" : rep.domination.reason + rep.farkas.reason;
    }
    r.artifacts.push_back(verify);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite certificates for the 4-uniform matching bound"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Print reports as JSON");

  RunConfig cfg;
  std::string out_dir = "emc4-out";
  bool full = false, fast = false;
  std::vector<std::string> run_branches;
  auto* run = app.add_subcommand("run-all", "Run every check and write artifacts, reports and a manifest");
  auto* full_flag = run->add_flag("--full", full, "Discover certificates and rerun searches (default)");
  run->add_flag("--fast", fast, "Re-verify the stored artifacts in --out")->excludes(full_flag);
  run->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--branch", run_branches, "Restrict the top-star check to these branches (c=K or c=23,l=L)");

  auto* pair = app.add_subcommand("pair-ferrers", "Audit legal pair Ferrers shapes");
  auto* triple = app.add_subcommand("triple-ferrers", "Audit legal triple Ferrers shapes");
  auto* thr = app.add_subcommand("threshold", "Residue classes, gap identities, weight bounds and constants");

  std::string branch, emit, verify;
  int ell = -1;
  bool all_branches = false;
  int workers = 1;
  auto* ts = app.add_subcommand("topstar", "Top-star Farkas certificates");
  auto* branch_opt = ts->add_option("--branch", branch, "Branch id, c=K or c=23,l=L");
  ts->add_option("--ell", ell, "Fixed lower missing count for c=23")->needs(branch_opt);
  ts->add_flag("--all", all_branches, "All 63 branches")->excludes(branch_opt);
  ts->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* ts_emit = ts->add_option("--emit-cert", emit, "Write the certificate (bundle) to PATH");
  ts->add_option("--verify-cert", verify, "Verify a stored certificate or bundle")->excludes(ts_emit);

  std::string part = "all";
  auto* nt = app.add_subcommand("notopstar", "No-top-star searches and assembly");
  nt->add_option("part", part, "blocker|hitting|patterns|rectangles|assemble|all")
      ->check(CLI::IsMember({"blocker", "hitting", "patterns", "rectangles", "assemble", "all"}));
  auto* nt_emit = nt->add_option("--emit-cert", emit, "Write the search transcript to PATH");
  nt->add_option("--verify-cert", verify, "Compare a stored transcript with a fresh search")->excludes(nt_emit);

  std::string board_out;
  auto* b15 = app.add_subcommand("board15", "15-board quotient dual certificate");
  auto* b11 = app.add_subcommand("board11", "11-board residual-cut dual certificate");
  for (auto* b : {b15, b11}) {
    auto* e = b->add_option("--emit-cert", emit, "Write the dual certificate to PATH");
    b->add_option("--verify-cert", verify, "Verify a stored dual certificate")->excludes(e);
    b->add_option("--out", board_out, "Directory for the certificate and tables");
  }

  std::string emit_dir, verify_dir;
  auto* man = app.add_subcommand("manifest", "Emit or verify a SHA-256 manifest");
  auto* me = man->add_option("--emit", emit_dir, "Write DIR/MANIFEST.sha256");
  man->add_option("--verify", verify_dir, "Check DIR against its manifest")->excludes(me);

  for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", json, "Print reports as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      cfg.mode = fast ? RunMode::Fast : RunMode::Full;
      cfg.out = out_dir;
      for (const auto& b : run_branches) cfg.topstar_branches.push_back(parse_topstar_branch(b));
      RunAllReport rep = run_all(cfg);
      for (auto& c : rep.checks) print_report(c, json);
      for (const auto& p : rep.manifest_problems) std::cout << "manifest: " << p << "\n";
      if (rep.resource_error) std::cerr << "error: " << rep.resource_message << "\n";
      std::cout << "run-all: " << (rep.ok() ? "ok" : "failed") << "\n";
      return rep.exit_code();
    }
    CheckReport r;
    if (*pair) r = timed([] { return check_pair_ferrers(); });
    if (*triple) r = timed([] { return check_triple_ferrers(); });
    if (*thr) r = timed([] { return check_threshold(); });
    if (*ts) {
      std::vector<TopstarBranch> branches;
      if (!branch.empty()) {
        if (ell >= 0) branch += ",l=" + std::to_string(ell);
        branches.push_back(parse_topstar_branch(branch));
      } else if (!all_branches && verify.empty()) {
        std::cerr << "topstar: give --branch or --all\n";
        return 2;
      }
      r = timed([&] { return topstar_command(branches, workers, emit, verify); });
    }
    if (*nt) r = timed([&] { return notopstar_command(part, emit, verify); });
    if (*b15) r = timed([&] { return board_command("board15", emit, verify, board_out); });
    if (*b11) r = timed([&] { return board_command("board11", emit, verify, board_out); });
    if (*man) {
      if (!emit_dir.empty()) {
        emit_manifest(emit_dir);
        std::cout << "manifest written to " << (std::filesystem::path(emit_dir) / kManifestName).string() << "\n";
        return 0;
      }
      if (verify_dir.empty()) {
        std::cerr << "manifest: give --emit DIR or --verify DIR\n";
        return 2;
      }
      const ManifestCheck c = verify_manifest(verify_dir);
      for (const auto& p : c.problems) std::cout << p << "\n";
      std::cout << "manifest: " << (c.ok ? "ok" : "failed") << "\n";
      return c.ok ? 0 : 1;
    }
    print_report(r, json);
    return status_code(r);
  } catch (const ProofError& e) {
    std::cerr << "proof failure: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
