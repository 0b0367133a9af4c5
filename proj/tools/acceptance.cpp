// Acceptance run: one PASS/FAIL line per criterion, computed from scratch.
// Exit code 0 when every line passes, 1 otherwise, 2 on a resource error.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "emc4/board11.hpp"
#include "emc4/board15.hpp"
#include "emc4/certificate_io.hpp"
#include "emc4/ferrers_audit.hpp"
#include "emc4/manifest.hpp"
#include "emc4/notopstar.hpp"
#include "emc4/pipeline.hpp"
#include "emc4/threshold.hpp"
#include "emc4/topstar.hpp"

using namespace emc4;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Line {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string secs(double s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << s << " s";
  return o.str();
}

Line pair_ferrers() {
  const auto t0 = Clock::now();
  const PairAuditReport a = audit_pairs();
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "checked=" << a.downsets_checked << " legal=" << a.legal_count << " max=" << a.max_legal_size << " in " << secs(t);
  return {"Pair Ferrers",
          a.downsets_checked == 70 && a.legal_count == 10 && a.max_legal_size == 4 && t < 1.0, d.str()};
}

Line triple_ferrers() {
  const auto t0 = Clock::now();
  const TripleAuditReport a = audit_triples();
  const BigInt oracle = macmahon_box_count(4, 4, 4);
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "checked=" << a.downsets_checked << " (oracle " << oracle << ") bad=" << a.bad_matchings
    << " legal=" << a.legal_count << " max=" << a.max_legal_size << " equality=" << a.equality_diagrams.size()
    << " in " << secs(t);
  const bool ok = a.downsets_checked == 232848 && BigInt(a.downsets_checked) == oracle && a.bad_matchings == 2016 &&
                  a.legal_count == 26893 && a.max_legal_size == 32 && a.equality_diagrams.size() == 4 && t < 60.0;
  return {"Triple Ferrers", ok, d.str()};
}

std::set<std::string> expected_branch_ids() {
  std::set<std::string> ids;
  for (int c = 0; c <= 37; ++c) {
    if (c != 23) ids.insert("c=" + std::to_string(c));
  }
  for (int l = 0; l <= 25; ++l) ids.insert("c=23,l=" + std::to_string(l));
  return ids;
}

Line topstar(int workers) {
  const auto t0 = Clock::now();
  const std::vector<TopstarBranch> branches = topstar_branches();
  std::set<std::string> ids;
  for (const auto& b : branches) ids.insert(b.id());
  std::vector<TopstarBranchResult> results(branches.size());
  std::vector<double> times(branches.size());
  std::vector<char> reverified(branches.size(), 0);
  register_topstar_generator();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < branches.size();) {
      const auto b0 = Clock::now();
      results[i] = run_topstar_branch(branches[i]);
      times[i] = seconds_since(b0);
      // Independent pass over the serialized certificate.
      const Json j = Json::parse(canonical_dump(certificate_to_json(results[i].certificate, "farkas")));
      const TopstarBranchResult again = verify_topstar_certificate(branches[i], certificate_from_json(j, "farkas"));
      reverified[i] = again.ok() && again.gap == results[i].gap;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  int ok = 0;
  Rational min_gap = results.empty() ? Rational(-1) : results.front().gap;
  double slowest = 0;
  std::string failed;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const bool good = results[i].ok() && reverified[i] && results[i].gap >= 0;
    ok += good;
    if (!good) failed += " " + branches[i].id();
    min_gap = std::min(min_gap, results[i].gap);
    slowest = std::max(slowest, times[i]);
  }
  std::ostringstream d;
  d << ok << "/" << branches.size() << " branches certified and re-verified, min gap " << to_string(min_gap)
    << ", slowest branch " << secs(slowest) << ", total " << secs(seconds_since(t0));
  if (!failed.empty()) d << ", failed:" << failed;
  const bool pass = ids == expected_branch_ids() && branches.size() == 63 && ok == 63 && min_gap >= 0 &&
                    slowest < 600.0;
  return {"Top-star", pass, d.str()};
}

Line notopstar() {
  const auto t0 = Clock::now();
  const NoTopstarReport rep = assemble_no_topstar();
  const double t = seconds_since(t0);
  std::vector<std::string> problems;
  if (rep.blocker.max_present != 48 || rep.blocker.min_blocker != 33) problems.push_back("upper blocker");
  if (rep.trace_threshold_checks != 30) problems.push_back("single-trace minima count");
  if (!rep.table.matches_expected) {
    std::string m;
    for (int v : rep.table.mismatched_m) {
      const auto k = static_cast<std::size_t>(v - 33);
      m += " m=" + std::to_string(v) + "(t " + std::to_string(rep.table.t[k]) + " vs " +
           std::to_string(reference_t()[k]) + ", p " + std::to_string(rep.table.p[k]) + " vs " +
           std::to_string(reference_p()[k]) + ")";
    }
    problems.push_back("reference (p,t) table differs at" + m);
  }
  if (!rep.tight_case_ok) problems.push_back("tight case");
  std::multiset<int> minima;
  int forcings = 0;
  bool patterns_ok = rep.patterns.size() == 9;
  for (const auto& p : rep.patterns) {
    patterns_ok = patterns_ok && p.ok;
    if (p.kind == "minimum") {
      minima.insert(p.result.optimum);
    } else {
      ++forcings;
    }
  }
  if (!patterns_ok || minima != std::multiset<int>{64, 64, 64, 64, 80} || forcings != 4) {
    problems.push_back("critical patterns");
  }
  if (rep.rectangle_cases != 72 || rep.worst_margin != -10624) problems.push_back("rectangle audit");
  if (!rep.ok) problems.push_back("assembly marker");
  if (t >= 1800.0) problems.push_back("runtime");
  std::ostringstream d;
  d << "blocker " << rep.blocker.max_present << "/" << rep.blocker.min_blocker << ", " << rep.trace_threshold_checks
    << " minima, " << rep.patterns.size() << " patterns, " << rep.rectangle_cases << " rectangles (worst "
    << rep.worst_margin << "), assembly " << marker_bool(rep.ok) << ", in " << secs(t);
  for (const auto& p : problems) d << "; " << p;
  return {"No-top-star", problems.empty(), d.str()};
}

Line board15_line() {
  const auto t0 = Clock::now();
  const Board15Report r = run_board15();
  const Board15Report again = verify_board15_certificate(
      certificate_from_json(Json::parse(canonical_dump(certificate_to_json(r.certificate, "dual-cut"))), "dual-cut"));
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "counts " << r.missing_variables << "/" << r.triple_variables << "/" << r.pair_variables << "/" << r.witnesses
    << "/" << r.closure_rows << ", orbits " << r.missing_orbits << "/" << r.triple_orbits << "/" << r.pair_orbits
    << ", quotient rows " << r.quotient_residual_rows << "/" << r.quotient_closure_rows << ", min slack "
    << to_string(r.domination.min_slack) << ", in " << secs(t);
  const bool ok = r.ok() && again.ok() && r.missing_variables == 480 && r.triple_variables == 288 &&
                  r.pair_variables == 54 && r.witnesses == 264402 && r.closure_rows == 2016 &&
                  r.missing_orbits == 13 && r.triple_orbits == 9 && r.pair_orbits == 5 &&
                  r.quotient_residual_rows == 206 && r.quotient_closure_rows == 33 && r.domination.min_slack == 0 &&
                  t < 300.0;
  return {"15-board", ok, d.str()};
}

Line board11_line() {
  const auto t0 = Clock::now();
  const Board11Report r = run_board11();
  const Board11Report again = verify_board11_certificate(
      certificate_from_json(Json::parse(canonical_dump(certificate_to_json(r.certificate, "dual-cut"))), "dual-cut"));
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "counts " << r.missing_variables << "/" << r.triple_variables << "/" << r.pair_variables << ", min triple "
    << to_string(r.domination.min_triple) << ", min pair " << to_string(r.domination.min_pair) << ", max load "
    << to_string(r.domination.max_load) << ", in " << secs(t);
  const bool ok = r.ok() && again.ok() && r.missing_variables == 260 && r.triple_variables == 68 &&
                  r.pair_variables == 3 && r.domination.min_triple >= 300 && r.domination.min_pair >= 144 &&
                  r.domination.max_load <= 625 && t < 60.0;
  return {"11-board", ok, d.str()};
}

Line threshold_line() {
  const auto t0 = Clock::now();
  const ThresholdReport r = run_threshold_checks(5000);
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << r.residues.classes.size() << " residue classes, last failure " << r.residues.last_failure << ", "
    << r.residues.disagreements.size() << " oracle disagreements up to " << r.residues.cross_check_max << ", "
    << r.weights.bounds_checked << " weight bounds, S4=" << r.S4 << " s4=" << r.s4 << ", in " << secs(t);
  const bool ok = r.residues.classes.size() == 25 && r.residues.table_matches && r.residues.last_failure == 3480 &&
                  r.residues.disagreements.empty() && r.residues.cross_check_max == 5000 && r.symbolic_ok &&
                  r.weights.bounds_checked == 6 && r.weights.identities && r.weights.chains && r.weights.constants &&
                  r.explicit_threshold_ok && r.S4 == 3481 && r.s4 == 6961 && t < 30.0;
  return {"Threshold", ok, d.str()};
}

// Up-sets and down-sets are exchanged by complement: exhaustive on [4]^2,
// sampled on [4]^3 and [4]^4.
bool duality_holds() {
  for (unsigned bits = 0; bits < (1u << 16); ++bits) {
    CellSet s(2);
    for (int c = 0; c < 16; ++c) {
      if (bits >> c & 1) s.insert(c);
    }
    if (is_up_set(s) != is_down_set(s.complement())) return false;
  }
  std::mt19937 rng(20240601);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 3 + trial % 2;
    CellSet s(d);
    for (int c = 0; c < cell_count(d); ++c) {
      if (rng() % 8 == 0) s.insert(c);
    }
    if (trial % 2 == 0) s = up_closure(s);
    if (is_up_set(s) != is_down_set(s.complement())) return false;
    if (!is_down_set(down_closure(s)) || !is_down_set(up_closure(s).complement())) return false;
  }
  return true;
}

bool principal_closures_hold() {
  for (int x = 0; x < 256; ++x) {
    const LatticePoint px = LatticePoint::decode(4, x);
    CellMask up, down;
    for (int y = 0; y < 256; ++y) {
      const LatticePoint py = LatticePoint::decode(4, y);
      up[static_cast<std::size_t>(y)] = px.leq(py);
      down[static_cast<std::size_t>(y)] = py.leq(px);
    }
    if (principal_up_closure(px).mask() != up || principal_down_closure(px).mask() != down) return false;
  }
  return true;
}

bool clauses_disjoint() {
  std::vector<SupportedTrace> traces;
  for (const auto& s : pair_supports()) {
    for (int v = 0; v < 16; ++v) traces.push_back(make_trace(s, v));
  }
  for (const auto& s : triple_supports()) {
    for (int v = 0; v < 64; ++v) traces.push_back(make_trace(s, v));
  }
  for (const auto& h : traces) {
    for (const Seed& seed : productive_seeds(h)) {
      for (const Clause& c : residual_seed_clauses(h, seed)) {
        for (int a = 0; a < 3; ++a) {
          const LatticePoint q = LatticePoint::decode(4, c[static_cast<std::size_t>(a)]);
          for (int b = a + 1; b < 3; ++b) {
            if (!q.disjoint_from(LatticePoint::decode(4, c[static_cast<std::size_t>(b)]))) return false;
          }
          if (q[seed.column] == seed.value) return false;
          for (int col = 0; col < 4; ++col) {
            if (h.value_in_column(col) == q[col]) return false;
          }
        }
      }
    }
  }
  return true;
}

std::vector<std::string> tamper_escapes() {
  std::vector<std::string> escaped;
  const Board11Report r11 = run_board11();
  FarkasCertificate c = r11.certificate;
  c.denominator *= 2;
  if (verify_board11_certificate(c).ok()) escaped.push_back("board11 doubled denominator");
  c = r11.certificate;
  for (auto& [id, n] : c.rows) n = 0;
  if (verify_board11_certificate(c).ok()) escaped.push_back("board11 zero multipliers");
  const Board15Report r15 = run_board15();
  c = r15.certificate;
  c.rows.emplace_back("t0<=0", BigInt(1));
  if (verify_board15_certificate(c).ok()) escaped.push_back("board15 forged row");
  c = r15.certificate;
  c.denominator *= 2;
  if (verify_board15_certificate(c).ok()) escaped.push_back("board15 doubled denominator");
  register_topstar_generator();
  const TopstarBranch b0 = parse_topstar_branch("c=0");
  const FarkasCertificate ts = run_topstar_branch(b0).certificate;
  c = ts;
  c.denominator *= 2;
  if (verify_topstar_certificate(b0, c).ok()) escaped.push_back("topstar doubled denominator");
  if (verify_topstar_certificate(parse_topstar_branch("c=1"), ts).ok()) escaped.push_back("topstar wrong branch");
  return escaped;
}

bool runs_deterministic(std::string& detail) {
  std::string manifests[2];
  for (int k = 0; k < 2; ++k) {
    RunConfig cfg;
    cfg.out = fs::temp_directory_path() / ("emc4-acceptance-run" + std::to_string(k));
    cfg.workers = k + 1;
    cfg.topstar_branches = {parse_topstar_branch("c=0"), parse_topstar_branch("c=1")};
    fs::remove_all(cfg.out);
    const RunAllReport r = run_all(cfg);
    if (r.exit_code() != 0) {
      detail = "run-all failed";
      return false;
    }
    std::ifstream in(cfg.out / kManifestName, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    manifests[k] = ss.str();
    fs::remove_all(cfg.out);
  }
  return !manifests[0].empty() && manifests[0] == manifests[1];
}

Line properties() {
  const auto t0 = Clock::now();
  std::vector<std::string> failed;
  if (!duality_holds()) failed.push_back("duality");
  if (!principal_closures_hold()) failed.push_back("principal closure");
  if (!clauses_disjoint()) failed.push_back("clause disjointness");
  for (const auto& e : tamper_escapes()) failed.push_back("tamper detection (" + e + ")");
  std::string why;
  if (!runs_deterministic(why)) failed.push_back("determinism " + why);
  std::ostringstream d;
  d << "duality, principal closure, clause disjointness, tamper detection, determinism (top-star subset c=0,c=1) in "
    << secs(seconds_since(t0));
  for (const auto& f : failed) d << "; failed " << f;
  return {"Property suites", failed.empty(), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run over every criterion"};
  int workers = 1;
  app.add_option("--workers", workers, "Worker threads for the top-star branches")->check(CLI::PositiveNumber);
  std::vector<std::string> only;
  app.add_option("--only", only, "Run only these criteria")
      ->check(CLI::IsMember({"pair", "triple", "topstar", "notopstar", "board15", "board11", "threshold", "properties"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    bool all = true;
    auto emit = [&](const Line& l) {
      all = all && l.pass;
      std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << std::endl;
    };
    const std::vector<std::pair<std::string, std::function<Line()>>> lines{
        {"pair", pair_ferrers},   {"triple", triple_ferrers},   {"topstar", [&] { return topstar(workers); }},
        {"notopstar", notopstar}, {"board15", board15_line},    {"board11", board11_line},
        {"threshold", threshold_line}, {"properties", properties}};
    for (const auto& [key, fn] : lines) {
      if (only.empty() || std::find(only.begin(), only.end(), key) != only.end()) emit(fn());
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
