#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "emc4/manifest.hpp"
#include "emc4/pipeline.hpp"

using namespace emc4;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config(const std::string& name, RunMode mode, int workers = 1) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.workers = workers;
  cfg.out = fs::temp_directory_path() / ("emc4-pipeline-" + name);
  cfg.topstar_branches = {parse_topstar_branch("c=0"), parse_topstar_branch("c=1")};
  return cfg;
}

const CheckReport& find(const RunAllReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

// One full run shared by the tests below.
const RunAllReport& full_run() {
  static const RunAllReport r = [] {
    const RunConfig cfg = config("a", RunMode::Full);
    fs::remove_all(cfg.out);
    return run_all(cfg);
  }();
  return r;
}

void copy_tree(const fs::path& from, const fs::path& to) {
  fs::remove_all(to);
  fs::copy(from, to, fs::copy_options::recursive);
}

}  // namespace

TEST(Pipeline, FullRunPassesAndWritesArtifacts) {
  const RunAllReport& r = full_run();
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_EQ(r.checks.size(), check_names().size());
  for (const auto& c : r.checks) EXPECT_EQ(c.status, CheckStatus::Ok) << c.name << ": " << c.reason;
  const fs::path out = config("a", RunMode::Full).out;
  for (const char* rel : {"certificates/topstar.json", "certificates/board15.json", "certificates/board11.json",
                          "transcripts/notopstar.json", "tables/board15_quotient.json", "summary.json",
                          "reports/board15.json", "MANIFEST.sha256"}) {
    EXPECT_TRUE(fs::exists(out / rel)) << rel;
  }
  EXPECT_TRUE(verify_manifest(out).ok);
  EXPECT_EQ(find(r, "topstar").markers.at("topstar_branches"), "2");
  EXPECT_EQ(find(r, "board11").markers.at("board11_max_load"), "625");
  const CheckReport& nt = find(r, "notopstar");
  EXPECT_EQ(nt.markers.at("exact_no_topstar_threshold_certificate_ok"), "True");
  EXPECT_EQ(nt.markers.at("rectangle_cases"), "72");
}

TEST(Pipeline, ReportsAreParseableAndDigestChecked) {
  full_run();
  const fs::path out = config("a", RunMode::Full).out;
  for (const auto& name : check_names()) {
    const CheckReport r = report_from_json(read_json(out / "reports" / (name + ".json")));
    EXPECT_EQ(r.name, name);
  }
  const Json summary = read_json(out / "summary.json");
  EXPECT_EQ(summary.at("all_checks_ok"), "True");
}

TEST(Pipeline, TwoRunsGiveIdenticalManifests) {
  full_run();
  const RunConfig cfg = config("b", RunMode::Full, 2);
  fs::remove_all(cfg.out);
  const RunAllReport r = run_all(cfg);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_EQ(slurp(cfg.out / kManifestName), slurp(config("a", RunMode::Full).out / kManifestName));
  fs::remove_all(cfg.out);
}

TEST(Pipeline, FastAfterFullKeepsMarkers) {
  const RunAllReport& full = full_run();
  RunConfig cfg = config("fast", RunMode::Fast);
  copy_tree(config("a", RunMode::Full).out, cfg.out);
  const RunAllReport fast = run_all(cfg);
  EXPECT_EQ(fast.exit_code(), 0);
  EXPECT_TRUE(fast.manifest_problems.empty());
  for (const auto& c : full.checks) {
    const CheckReport& f = find(fast, c.name);
    EXPECT_EQ(f.status, CheckStatus::Ok) << c.name << ": " << f.reason;
    EXPECT_EQ(f.markers, c.markers) << c.name;
  }
  EXPECT_EQ(slurp(cfg.out / kManifestName), slurp(config("a", RunMode::Full).out / kManifestName));
  fs::remove_all(cfg.out);
}

TEST(Pipeline, TamperedCertificateNamesTheCheck) {
  full_run();
  RunConfig cfg = config("tamper", RunMode::Fast);
  copy_tree(config("a", RunMode::Full).out, cfg.out);
  const fs::path cert = cfg.out / "certificates" / "board11.json";
  Json j = read_json(cert);
  j["denominator"] = (BigInt(j.at("denominator").get<std::string>()) * 2).str();
  write_json(cert, j);

  const RunAllReport r = run_all(cfg);
  EXPECT_EQ(r.exit_code(), 1);
  ASSERT_EQ(r.manifest_problems.size(), 1u);
  EXPECT_EQ(r.manifest_problems[0], "changed: certificates/board11.json");
  EXPECT_EQ(find(r, "board11").status, CheckStatus::Failed);
  EXPECT_FALSE(find(r, "board11").reason.empty());
  EXPECT_EQ(find(r, "board15").status, CheckStatus::Ok);
  // The old manifest is kept, so a second fast run still fails.
  EXPECT_FALSE(verify_manifest(cfg.out).ok);
  fs::remove_all(cfg.out);
}

TEST(Pipeline, SchemaErrorInBundleFailsTopstar) {
  full_run();
  RunConfig cfg = config("schema", RunMode::Fast);
  copy_tree(config("a", RunMode::Full).out, cfg.out);
  const fs::path cert = cfg.out / "certificates" / "topstar.json";
  Json j = read_json(cert);
  j["certificates"][0]["rows"][0]["n"] = "-1";
  write_json(cert, j);
  const RunAllReport r = run_all(cfg);
  EXPECT_EQ(r.exit_code(), 1);
  const CheckReport& ts = find(r, "topstar");
  EXPECT_EQ(ts.status, CheckStatus::Failed);
  EXPECT_NE(ts.reason.find("negative"), std::string::npos) << ts.reason;
  fs::remove_all(cfg.out);
}

TEST(Pipeline, MissingArtifactIsAResourceError) {
  full_run();
  RunConfig cfg = config("missing", RunMode::Fast);
  copy_tree(config("a", RunMode::Full).out, cfg.out);
  fs::remove(cfg.out / "certificates" / "board15.json");
  const RunAllReport r = run_all(cfg);
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_NE(r.resource_message.find("board15"), std::string::npos) << r.resource_message;
  fs::remove_all(cfg.out);
}

TEST(Pipeline, BadConfiguration) {
  RunConfig cfg = config("none", RunMode::Fast);
  fs::remove_all(cfg.out);
  EXPECT_THROW(run_all(cfg), ResourceError);
  cfg.mode = RunMode::Full;
  cfg.workers = 0;
  EXPECT_THROW(run_all(cfg), ResourceError);
}

TEST(Pipeline, Board15TablesListOrbits) {
  const Json t = board15_tables_json();
  check_no_floats(t);
  EXPECT_EQ(t.at("residual_rows").size(), 206u);
  EXPECT_EQ(t.at("closure_rows").size(), 33u);
}
