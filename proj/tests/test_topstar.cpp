#include <gtest/gtest.h>

#include <random>
#include <set>

#include "emc4/ferrers_audit.hpp"
#include "emc4/notopstar.hpp"
#include "emc4/topstar.hpp"

using namespace emc4;

namespace {

int c3(int x, int i) { return (x >> (2 * i)) & 3; }

bool has_zero(int x) { return c3(x, 0) == 0 || c3(x, 1) == 0 || c3(x, 2) == 0; }

// Down-sets of [4]^3 inside Z, by size.
std::vector<std::vector<std::uint64_t>> z_downsets_by_size() {
  std::vector<std::vector<std::uint64_t>> out(38);
  for (const auto& s : enumerate_ferrers(3)) {
    const CellSet cs = expand_ferrers(s);
    std::uint64_t m = 0;
    bool inside = true;
    for (int x : cs.indices()) {
      inside = inside && has_zero(x);
      m |= 1ULL << x;
    }
    if (inside) out[cs.size()].push_back(m);
  }
  return out;
}

// Present traces implied by a missing set M: closure and residual hitting per
// trace, then the largest legal Ferrers shape per support.
std::vector<Rational> configuration_point(const CellMask& M) {
  std::vector<Rational> x(kTopstarVariables, Rational(0));
  for (int v = 0; v < 64; ++v) x[static_cast<std::size_t>(topstar_y(v))] = M.test(static_cast<std::size_t>(v + 192)) ? 0 : 1;
  for (int v = 0; v < 64; ++v)
    for (int t = 0; t < 3; ++t) x[static_cast<std::size_t>(topstar_m(v, t))] = M.test(static_cast<std::size_t>(v + 64 * t)) ? 1 : 0;
  auto allowed = [&](const SupportedTrace& h) {
    if ((h.extensions() & M).any()) return false;
    for (const auto& cl : residual_seed_clauses(h))
      if ((clause_mask(cl) & M).none()) return false;
    return true;
  };
  for (int s = 0; s < 6; ++s) {
    std::uint16_t ok = 0;
    for (int u = 0; u < 16; ++u)
      if (allowed(make_trace(pair_supports()[static_cast<std::size_t>(s)], u))) ok = static_cast<std::uint16_t>(ok | (1u << u));
    const auto best = best_legal_pair(ok);
    const std::uint64_t pick = best.maximizers.empty() ? 0 : best.maximizers.front();
    for (int u = 0; u < 16; ++u)
      if ((pick >> u) & 1) x[static_cast<std::size_t>(topstar_p(s, u))] = 1;
  }
  for (int s = 0; s < 4; ++s) {
    std::uint64_t ok = 0;
    for (int v = 0; v < 64; ++v)
      if (allowed(make_trace(triple_supports()[static_cast<std::size_t>(s)], v))) ok |= 1ULL << v;
    const auto best = best_legal_triple(ok);
    const std::uint64_t pick = best.maximizers.empty() ? 0 : best.maximizers.front();
    for (int v = 0; v < 64; ++v)
      if ((pick >> v) & 1) x[static_cast<std::size_t>(topstar_t(s, v))] = 1;
  }
  return x;
}

Rational objective(const std::vector<Rational>& x) {
  Rational s = 0;
  for (int v = 0; v < kTopstarVariables; ++v) {
    const int w = v < 64 ? 625 : v < 256 ? -625 : v < 512 ? 300 : 144;
    s += w * x[static_cast<std::size_t>(v)];
  }
  return s;
}

}  // namespace

TEST(TopstarBranches, SixtyThree) {
  const auto b = topstar_branches();
  EXPECT_EQ(b.size(), 63u);
  std::set<std::string> ids;
  for (const auto& br : b) {
    EXPECT_TRUE(br.valid());
    ids.insert(br.id());
    EXPECT_EQ(parse_topstar_branch(br.id()), br);
  }
  EXPECT_EQ(ids.size(), 63u);
  EXPECT_FALSE((TopstarBranch{23, -1}).valid());
  EXPECT_FALSE((TopstarBranch{38, -1}).valid());
  EXPECT_FALSE((TopstarBranch{23, 26}).valid());
  EXPECT_FALSE((TopstarBranch{5, 2}).valid());
  EXPECT_THROW(parse_topstar_branch("c=23"), std::invalid_argument);
  EXPECT_THROW(parse_topstar_branch("c=5x"), std::invalid_argument);
  EXPECT_THROW(build_relaxation({40, -1}), std::invalid_argument);
}

TEST(TopstarRelaxation, VariablesAndObjective) {
  const auto sys = build_relaxation({10, -1});
  EXPECT_EQ(sys.variable_count(), 608);
  EXPECT_EQ(zero_cells().size(), 37u);
  EXPECT_EQ(sys.bound(), 40000);
  EXPECT_EQ(sys.variable_name(topstar_y(1 + 4 * 2 + 16 * 3)), "y123");
  EXPECT_EQ(sys.variable_name(topstar_m(0, 2)), "m000_2");
  EXPECT_EQ(sys.variable_name(topstar_p(5, 1 + 4 * 2)), "p23_12");
  int top_support = 0;
  for (const auto& r : sys.rows())
    if (r.tag == "T1s") ++top_support;
  EXPECT_EQ(top_support, 27);
}

TEST(TopstarRelaxation, DeterministicRebuild) {
  const auto a = build_relaxation({23, 7});
  const auto b = build_relaxation({23, 7});
  ASSERT_EQ(a.row_count(), b.row_count());
  for (int i = 0; i < a.row_count(); ++i) {
    EXPECT_EQ(a.row_at(i).id, b.row_at(i).id);
    EXPECT_EQ(a.row_at(i).coeffs, b.row_at(i).coeffs);
    EXPECT_EQ(a.row_at(i).rhs, b.row_at(i).rhs);
  }
}

TEST(TopstarRelaxation, ResidualRowCountMatchesClosedForm) {
  // Ordered residual triples: per column a(a-1)(a-2) for a available values;
  // unordered divides by 6.
  long long expected = 0;
  for (int z = 256; z < 608; ++z) {
    const auto h = topstar_trace(z);
    for (int j = 0; j < 4; ++j)
      for (int u = 0; u < 2; ++u) {
        if (h.value_in_column(j) == u) continue;
        long long ordered = 1;
        for (int col = 0; col < 4; ++col) {
          int a = 4 - (h.value_in_column(col) >= 0 ? 1 : 0) - (col == j ? 1 : 0);
          ordered *= a * (a - 1) * (a - 2);
        }
        expected += ordered / 6;
      }
  }
  const auto n = topstar_row_counts({10, -1});
  EXPECT_EQ(n.residual_seed, expected);
  EXPECT_EQ(expected, 96LL * 4 * 864 + 256LL * 2 * 216);
  EXPECT_EQ(n.closure, 96 * 16 + 256 * 4);
  EXPECT_EQ(n.bad_triple, 4 * 2016);
}

TEST(TopstarRelaxation, ResidualRowShape) {
  const auto metas = all_topstar_rows({10, -1});
  long long seen = 0;
  for (std::size_t i = 0; i < metas.size(); i += 37) {
    if (metas[i].family != "T8") continue;
    const auto row = topstar_row(metas[i]);
    const auto& p = metas[i].params;
    int tops = 0;
    std::map<int, Rational> expect;
    expect[p[0]] = 1;
    for (int k = 3; k < 6; ++k) {
      const int q = p[static_cast<std::size_t>(k)];
      if ((q >> 6) == 3) {
        expect[topstar_y(q & 63)] = 1;
        ++tops;
      } else {
        expect[topstar_m(q & 63, q >> 6)] = -1;
      }
    }
    EXPECT_EQ((std::map<int, Rational>(row.coeffs.begin(), row.coeffs.end())), expect);
    EXPECT_EQ(row.rhs, tops);
    ++seen;
  }
  EXPECT_GT(seen, 10000);
}

TEST(TopstarRelaxation, RowsRegenerateAndTamperIsDetected) {
  register_topstar_generator();
  auto sys = build_relaxation({23, 3});
  for (const auto& r : sys.rows()) EXPECT_TRUE(regenerate_and_match(sys, r.id)) << r.id;
  RationalSystem s2 = build_relaxation({23, 3});
  LinearRow bad = topstar_row(parse_topstar_row_id("T1d:5,0"));
  bad.id = "T1d:5,0x";
  bad.rhs = 1;
  s2.add_row(bad);
  EXPECT_FALSE(regenerate_and_match(s2, "T1d:5,0x"));
  EXPECT_THROW(parse_topstar_row_id("T1s:01"), std::invalid_argument);
  EXPECT_THROW(parse_topstar_row_id("T1s"), std::invalid_argument);
  EXPECT_THROW(topstar_row(parse_topstar_row_id("T1s:0")), std::invalid_argument);
  EXPECT_THROW(topstar_row(parse_topstar_row_id("T8:300,0,0,1,2,3")), std::invalid_argument);
  EXPECT_THROW(topstar_row(parse_topstar_row_id("T10ya:37,0")), std::invalid_argument);
}

TEST(TopstarForcing, ExtremeBranches) {
  const auto none = ideal_forcing_rows(0);
  EXPECT_EQ(none.size(), 37u);
  for (const auto& r : none) EXPECT_EQ(r.tag, "T10ya");
  const auto all = ideal_forcing_rows(37);
  EXPECT_EQ(all.size(), 37u);
  for (const auto& r : all) EXPECT_EQ(r.tag, "T10yp");
  int m_absent = 0;
  for (const auto& r : ideal_forcing_rows(23, 0))
    if (r.tag == "T10ma") ++m_absent;
  EXPECT_EQ(m_absent, 192);
  EXPECT_THROW(ideal_forcing_rows(-1), std::invalid_argument);
}

TEST(TopstarForcing, SoundAgainstExhaustiveDownsets) {
  const auto by_size = z_downsets_by_size();
  for (int c = 0; c <= 37; ++c) {
    ASSERT_FALSE(by_size[static_cast<std::size_t>(c)].empty()) << c;
    std::uint64_t always = ~0ULL, ever = 0;
    for (auto m : by_size[static_cast<std::size_t>(c)]) {
      always &= m;
      ever |= m;
    }
    std::uint64_t absent = 0, present = 0;
    for (const auto& r : ideal_forcing_rows(c)) {
      const int x = r.meta.params[1];
      (r.tag == "T10ya" ? absent : present) |= 1ULL << x;
    }
    EXPECT_EQ(absent & ever, 0u) << c;
    EXPECT_EQ(present & ~always, 0u) << c;
    if (c == 23) {
      EXPECT_EQ(absent, 0u);
      EXPECT_NE(present, 0u);
      std::set<std::string> kinds;
      for (const auto& r : ideal_forcing_rows(23, 10)) kinds.insert(r.tag);
      EXPECT_EQ(kinds, (std::set<std::string>{"T10ma", "T10mp", "T10yp"}));
    }
  }
}

TEST(TopstarForcing, LowerForcingSoundOnRandomUpsets) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    // Random up-set of [4]^3 x {0,1,2}, stored as cells x + 64 t.
    std::bitset<192> n;
    const int seeds = 1 + trial % 4;
    for (int k = 0; k < seeds; ++k) {
      const int s = static_cast<int>(rng() % 192);
      for (int w = 0; w < 192; ++w) {
        const int x = w % 64, t = w / 64, sx = s % 64, st = s / 64;
        if (c3(x, 0) >= c3(sx, 0) && c3(x, 1) >= c3(sx, 1) && c3(x, 2) >= c3(sx, 2) && t >= st) n.set(static_cast<std::size_t>(w));
      }
    }
    const int ell = static_cast<int>(n.count());
    if (ell > 25) continue;
    for (const auto& r : ideal_forcing_rows(23, ell)) {
      if (r.tag != "T10ma" && r.tag != "T10mp") continue;
      const int cell = r.meta.params[1] + 64 * r.meta.params[2];
      if (r.tag == "T10ma") EXPECT_FALSE(n.test(static_cast<std::size_t>(cell)));
      if (r.tag == "T10mp") EXPECT_TRUE(n.test(static_cast<std::size_t>(cell)));
    }
  }
}

TEST(TopstarSoundness, ConstructedConfigurationsSatisfyEveryRow) {
  std::mt19937 rng(2024);
  CellMask star;
  for (int q = 0; q < 256; ++q)
    if ((q >> 6) == 3 && c3(q, 0) >= 1 && c3(q, 1) >= 1 && c3(q, 2) >= 1) star.set(static_cast<std::size_t>(q));
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 12; ++trial) {
    CellMask M = star;
    const int extra = static_cast<int>(rng() % 6);
    for (int k = 0; k < extra; ++k) {
      const int cell = static_cast<int>(rng() % 256);
      M |= up_masks4()[static_cast<std::size_t>(cell)];
    }
    if (M.count() > 66) continue;
    int top_missing = 0, lower_missing = 0;
    for (int q = 0; q < 256; ++q)
      if (M.test(static_cast<std::size_t>(q))) ((q >> 6) == 3 ? top_missing : lower_missing)++;
    const int c = 64 - top_missing;
    TopstarBranch br{c, c == 23 ? lower_missing : -1};
    ASSERT_TRUE(br.valid());
    const auto x = configuration_point(M);
    EXPECT_TRUE(violated_topstar_families(br, x).empty()) << br.id();
    EXPECT_LE(objective(x), 40000);
    ++checked;
  }
  EXPECT_GE(checked, 8);
}

TEST(TopstarCertificates, SelectedBranchesCertifyAndReverify) {
  for (const TopstarBranch br : {TopstarBranch{0, -1}, TopstarBranch{37, -1}, TopstarBranch{23, 0}}) {
    const auto res = run_topstar_branch(br);
    ASSERT_EQ(res.status, LpStatus::Certified) << br.id();
    EXPECT_TRUE(res.verified);
    EXPECT_TRUE(res.rows_regenerated);
    EXPECT_GE(res.gap, 0);
    EXPECT_TRUE(res.ok());
    const auto again = verify_topstar_certificate(br, res.certificate);
    EXPECT_TRUE(again.ok()) << br.id();
    EXPECT_EQ(again.gap, res.gap);

    auto wrong_branch = res.certificate;
    const TopstarBranch other{br.c == 0 ? 1 : 0, -1};
    wrong_branch.label = other.id();
    EXPECT_FALSE(verify_topstar_certificate(other, wrong_branch).ok());

    auto doubled = res.certificate;
    doubled.denominator *= 2;
    EXPECT_FALSE(verify_topstar_certificate(br, doubled).ok());

    auto forged = res.certificate;
    forged.rows.emplace_back("T1s:0", BigInt(1));
    EXPECT_FALSE(verify_topstar_certificate(br, forged).ok());

    auto stripped = res.certificate;
    stripped.rows.clear();
    EXPECT_FALSE(verify_topstar_certificate(br, stripped).ok());
  }
}
