#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "emc4/board11.hpp"

using namespace emc4;

namespace {

int spread_of(unsigned s) {
  const bool a = s & (0xFu << 3);
  const bool b = s & (0xFu << 7);
  return a + b;
}

bool fixed_quad(unsigned q) {
  for (int c = 0; c < 2; ++c) {
    if (q == (0xFu << (3 + 4 * c)) || q == (0b111u | (1u << (3 + 4 * c))) || q == (0b111u | (1u << (4 + 4 * c)))) {
      return true;
    }
  }
  return false;
}

const Board11Report& report() {
  static const Board11Report r = run_board11();
  return r;
}

}  // namespace

TEST(Board11Variables, Counts) {
  const LocalBoard& b = board11();
  EXPECT_EQ(b.points(), 11);
  EXPECT_EQ(b.fixed_quads().size(), 6u);
  EXPECT_EQ(b.missing_variables().size(), 260u);
  EXPECT_EQ(b.triple_variables().size(), 68u);
  EXPECT_EQ(b.pair_variables().size(), 3u);
  // C(11,4) - 2 C(7,4) quads meet both columns.
  EXPECT_EQ(BigInt(260), binomial(11, 4) - 2 * binomial(7, 4));
  EXPECT_EQ(BigInt(68), 2 * (binomial(7, 3) - 1));
}

TEST(Board11Cuts, MatchBruteForce) {
  std::set<std::string> expected;
  const LocalBoard& b = board11();
  for (unsigned h = 0; h < (1u << 11); ++h) {
    const int k = std::popcount(h);
    if (!((k == 3 && spread_of(h) == 1) || (k == 2 && spread_of(h) == 0))) continue;
    for (unsigned q1 = 0; q1 < (1u << 11); ++q1) {
      if (std::popcount(q1) != 4 || (q1 & h) || !(fixed_quad(q1) || spread_of(q1) == 2)) continue;
      for (unsigned q2 = q1 + 1; q2 < (1u << 11); ++q2) {
        if (std::popcount(q2) != 4 || (q2 & h) || (q2 & q1) || !(fixed_quad(q2) || spread_of(q2) == 2)) continue;
        expected.insert(b.label(static_cast<PointSet>(h)) + "|" + b.label(static_cast<PointSet>(q1)) + "|" +
                        b.label(static_cast<PointSet>(q2)));
      }
    }
  }
  const auto cuts = regenerate_residual_cuts11();
  std::set<std::string> got;
  for (const auto& c : cuts) got.insert(cut_id11(c));
  EXPECT_EQ(got.size(), cuts.size());
  EXPECT_EQ(got, expected);
  EXPECT_EQ(cuts.size(), 2285u);
}

TEST(Board11Cuts, WitnessDiscipline) {
  const LocalBoard& b = board11();
  const PointSet both_columns = static_cast<PointSet>(b.column(0) | b.column(1));
  int infeasible = 0;
  for (const auto& c : regenerate_residual_cuts11()) {
    ASSERT_TRUE(check_cut11(c));
    EXPECT_EQ(c.h & c.quads[0], 0);
    EXPECT_EQ(c.h & c.quads[1], 0);
    EXPECT_EQ(c.quads[0] & c.quads[1], 0);
    for (PointSet q : c.quads) EXPECT_NE(fixed_quad(q), spread_of(q) == 2);
    for (PointSet q : c.vars) EXPECT_EQ(spread_of(q), 2);
    // Both full columns only fit beside a trace inside D.
    if ((c.quads[0] | c.quads[1]) == both_columns) EXPECT_EQ(spread_of(c.h), 0);
    if (c.infeasibility()) {
      ++infeasible;
      EXPECT_TRUE(fixed_quad(c.quads[0]) && fixed_quad(c.quads[1]));
    }
    EXPECT_EQ(cut_id11(parse_cut_id11(cut_id11(c))), cut_id11(c));
  }
  EXPECT_EQ(report().infeasibility_cuts, static_cast<std::size_t>(infeasible));
}

TEST(Board11Cuts, MalformedIdsRejected) {
  EXPECT_THROW(parse_cut_id11("D0D1|B0B1B2B3|A0A1A2A3"), std::invalid_argument);  // unsorted
  EXPECT_THROW(parse_cut_id11("D0D1|A0A1A2A3|A0B1B2B3"), std::invalid_argument);  // overlap
  EXPECT_THROW(parse_cut_id11("D0D1|D2A0A1A2|B0B1B2B3"), std::invalid_argument);  // neither F nor Q
  EXPECT_THROW(parse_cut_id11("D0A0|A1A2A3B0|B1B2B3D1"), std::invalid_argument);  // spread-1 pair
  EXPECT_THROW(parse_cut_id11("D0D1|A0A1A2A3"), std::invalid_argument);
  EXPECT_NO_THROW(parse_cut_id11("D0D1|A0A1A2A3|B0B1B2B3"));
}

TEST(Board11Dual, DiscoveredAndVerified) {
  const Board11Report& r = report();
  EXPECT_TRUE(r.counts_ok);
  EXPECT_TRUE(r.witnesses_ok);
  EXPECT_TRUE(r.farkas.ok) << r.farkas.reason;
  EXPECT_TRUE(r.rows_regenerated);
  EXPECT_TRUE(r.domination.ok) << r.domination.reason;
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.domination.max_load, 625);
  EXPECT_GE(r.domination.min_triple, 300);
  EXPECT_GE(r.domination.min_pair, 144);
  EXPECT_GT(r.domination.support, 0);
}

TEST(Board11Dual, StoredCertificateReverifies) {
  EXPECT_TRUE(verify_board11_certificate(report().certificate).ok());
}

TEST(Board11Dual, TamperedCertificatesRejected) {
  FarkasCertificate zero;
  zero.label = "board11";
  EXPECT_FALSE(verify_domination11(zero).ok);

  FarkasCertificate doubled = report().certificate;
  doubled.denominator *= 2;
  EXPECT_FALSE(verify_domination11(doubled).ok);

  FarkasCertificate inflated = report().certificate;
  for (auto& [id, n] : inflated.rows) n *= 2;
  const Domination11 d = verify_domination11(inflated);
  EXPECT_FALSE(d.ok);

  FarkasCertificate forged = report().certificate;
  forged.rows.emplace_back("D0D1|D2A0A1A2|B0B1B2B3", 1);
  EXPECT_FALSE(verify_domination11(forged).ok);
  EXPECT_FALSE(verify_board11_certificate(forged).ok());

  FarkasCertificate box = report().certificate;
  box.upper.emplace_back("m:D0A0B0B1", 1);
  EXPECT_FALSE(verify_domination11(box).ok);
}

TEST(Board11Layer, AssemblyConstants) {
  const LayerAssembly a = layer_assembly(2);
  EXPECT_EQ(a.triple_multiplicity, 3);
  EXPECT_EQ(a.pair_multiplicity, 6);
  EXPECT_EQ(a.missing_multiplicity, 1);
  EXPECT_EQ(a.triple_coefficient, Rational(36, 25));
  EXPECT_EQ(a.pair_coefficient, Rational(864, 625));
  EXPECT_EQ(BigInt(a.pair_multiplicity), binomial(4, 2));
}
