#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "emc4/board15.hpp"

using namespace emc4;

namespace {

// Independent description of the 15-board: points 0..2 are D, column c is
// 3 + 4c .. 6 + 4c.
int col_of(int p) { return p < 3 ? -1 : (p - 3) / 4; }

int spread_of(unsigned s) {
  std::set<int> cols;
  for (int p = 0; p < 15; ++p) {
    if ((s >> p) & 1u && col_of(p) >= 0) cols.insert(col_of(p));
  }
  return static_cast<int>(cols.size());
}

bool fixed_quad(unsigned q) {
  for (int c = 0; c < 3; ++c) {
    const unsigned col = 0xFu << (3 + 4 * c);
    if (q == col || q == (0b111u | (1u << (3 + 4 * c))) || q == (0b111u | (1u << (4 + 4 * c)))) return true;
  }
  return false;
}

bool allowed_quad(unsigned q) { return fixed_quad(q) || spread_of(q) == 3; }

// All partitions of a point set into quads, no filter.
void all_partitions(unsigned rest, std::vector<unsigned>& cur, std::vector<std::vector<unsigned>>& out) {
  if (!rest) {
    out.push_back(cur);
    return;
  }
  const int a = std::countr_zero(rest);
  std::vector<int> others;
  for (int p = a + 1; p < 15; ++p) {
    if ((rest >> p) & 1u) others.push_back(p);
  }
  for (std::size_t i = 0; i < others.size(); ++i)
    for (std::size_t j = i + 1; j < others.size(); ++j)
      for (std::size_t k = j + 1; k < others.size(); ++k) {
        const unsigned q = (1u << a) | (1u << others[i]) | (1u << others[j]) | (1u << others[k]);
        cur.push_back(q);
        all_partitions(rest & ~q, cur, out);
        cur.pop_back();
      }
}

const LabelledRows15& rows() {
  static const LabelledRows15 r = regenerate_labelled_rows15();
  return r;
}

const SymmetryGroup15& group() {
  static const SymmetryGroup15 g = symmetry_group15();
  return g;
}

const Quotient15& quotient() {
  static const Quotient15 q = quotient_rows15(group(), rows());
  return q;
}

const Board15Report& report() {
  static const Board15Report r = run_board15();
  return r;
}

}  // namespace

TEST(Board15Variables, CountsAndSpreads) {
  const LocalBoard& b = board15();
  EXPECT_EQ(b.points(), 15);
  EXPECT_EQ(b.fixed_quads().size(), 9u);
  EXPECT_EQ(b.missing_variables().size(), 480u);
  EXPECT_EQ(b.triple_variables().size(), 288u);
  EXPECT_EQ(b.pair_variables().size(), 54u);
  for (PointSet q : b.missing_variables()) EXPECT_EQ(spread_of(q), 3);
  for (PointSet h : b.triple_variables()) EXPECT_EQ(spread_of(h), 2);
  for (PointSet h : b.pair_variables()) EXPECT_EQ(spread_of(h), 1);
  for (PointSet f : b.fixed_quads()) EXPECT_TRUE(fixed_quad(f));
}

TEST(Board15Variables, LabelsRoundTrip) {
  const LocalBoard& b = board15();
  EXPECT_EQ(b.label(b.column(1)), "B0B1B2B3");
  EXPECT_EQ(b.parse("D0D1D2C1"), static_cast<PointSet>(0b111 | (1u << 12)));
  for (PointSet q : b.missing_variables()) EXPECT_EQ(b.parse(b.label(q)), q);
  EXPECT_THROW(b.parse("A1A0"), std::invalid_argument);
  EXPECT_THROW(b.parse("E0"), std::invalid_argument);
  EXPECT_THROW(b.parse("D3"), std::invalid_argument);
}

TEST(Board15Rows, RawPartitionCountIsMultinomial) {
  std::vector<std::vector<unsigned>> parts;
  std::vector<unsigned> cur;
  all_partitions(0x7FFFu & ~0b111u, cur, parts);
  // 12! / (4!^3 3!)
  EXPECT_EQ(parts.size(), 479001600u / (24u * 24u * 24u * 6u));
  EXPECT_EQ(parts.size(), 5775u);
}

TEST(Board15Rows, WitnessesMatchBruteForce) {
  const LocalBoard& b = board15();
  long long expected = 0;
  std::set<std::pair<unsigned, std::vector<unsigned>>> distinct;
  auto count = [&](unsigned h, unsigned rest) {
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> cur;
    all_partitions(rest, cur, parts);
    for (const auto& p : parts) {
      if (!std::all_of(p.begin(), p.end(), allowed_quad)) continue;
      ++expected;
      std::vector<unsigned> vars;
      for (unsigned q : p) {
        if (!fixed_quad(q)) vars.push_back(q);
      }
      std::sort(vars.begin(), vars.end());
      distinct.emplace(h, vars);
    }
  };
  for (PointSet h : b.triple_variables()) count(h, 0x7FFFu & ~h);
  for (PointSet h : b.pair_variables()) {
    for (int a = 0; a < 15; ++a) {
      if (!((h >> a) & 1)) count(h, 0x7FFFu & ~h & ~(1u << a));
    }
  }
  EXPECT_EQ(expected, 264402);
  EXPECT_EQ(rows().witnesses.size(), 264402u);
  EXPECT_EQ(rows().residual.size(), distinct.size());
  for (const Witness15& w : rows().witnesses) {
    unsigned all = w.h;
    for (PointSet q : w.quads) {
      EXPECT_EQ(all & q, 0u);
      all |= q;
      EXPECT_TRUE(allowed_quad(q));
    }
    if (w.set_aside >= 0) all |= 1u << w.set_aside;
    EXPECT_EQ(all, 0x7FFFu);
  }
}

TEST(Board15Rows, ClosureRows) {
  EXPECT_EQ(rows().closure.size(), 2016u);
  for (const auto& [h, q] : rows().closure) {
    EXPECT_EQ(h & q, h);
    EXPECT_EQ(spread_of(q), 3);
  }
  // Count (trace, quad) containments directly.
  long long expected = 0;
  for (PointSet q : board15().missing_variables()) {
    for (PointSet h : board15().triple_variables()) expected += (h & q) == h;
    for (PointSet h : board15().pair_variables()) expected += (h & q) == h;
  }
  EXPECT_EQ(expected, 2016);
}

TEST(Board15Group, AxiomsAndOrder) {
  const GroupCheck c = check_group15(group());
  EXPECT_EQ(c.order, 2304u);
  EXPECT_TRUE(c.closed);
  EXPECT_TRUE(c.inverses);
  EXPECT_TRUE(c.associative);
  EXPECT_TRUE(c.preserves_fixed);
  EXPECT_EQ(group().generators.size(), 10u);
  // 3! * 3! * 4^3
  EXPECT_EQ(group().elements.size(), 6u * 6u * 64u);
}

TEST(Board15Group, EveryElementPermutesFixedFamily) {
  const LocalBoard& b = board15();
  for (const Perm15& g : group().elements) {
    std::vector<PointSet> image;
    for (PointSet f : b.fixed_quads()) image.push_back(apply(g, f));
    std::sort(image.begin(), image.end());
    std::vector<PointSet> fixed = b.fixed_quads();
    std::sort(fixed.begin(), fixed.end());
    ASSERT_EQ(image, fixed);
  }
}

TEST(Board15Group, AveragingSoundnessSpotCheck) {
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<std::size_t> pick_g(0, group().elements.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_w(0, rows().witnesses.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const Perm15& g = group().elements[pick_g(rng)];
    const LabelledRow row = witness_row(rows().witnesses[pick_w(rng)]);
    ASSERT_TRUE(rows().contains(apply(g, row)));
  }
}

TEST(Board15Quotient, OrbitCountsAndSizes) {
  const Quotient15& q = quotient();
  EXPECT_EQ(q.missing_orbits.size(), 13u);
  EXPECT_EQ(q.triple_orbits.size(), 9u);
  EXPECT_EQ(q.pair_orbits.size(), 5u);
  auto total = [](const std::vector<Orbit>& orbits) {
    int n = 0;
    for (const Orbit& o : orbits) {
      n += o.size();
      EXPECT_EQ(2304 % o.size(), 0);  // orbit-stabilizer
    }
    return n;
  };
  EXPECT_EQ(total(q.missing_orbits), 480);
  EXPECT_EQ(total(q.triple_orbits), 288);
  EXPECT_EQ(total(q.pair_orbits), 54);
  for (const Perm15& g : group().elements) {
    for (PointSet m : board15().missing_variables()) ASSERT_EQ(q.missing_orbit_of(apply(g, m)), q.missing_orbit_of(m));
  }
}

TEST(Board15Quotient, RowCounts) {
  EXPECT_EQ(quotient().residual.size(), 206u);
  EXPECT_EQ(quotient().closure.size(), 33u);
  EXPECT_EQ(quotient().representatives.size(), 206u);
}

TEST(Board15Quotient, RowIdsRoundTrip) {
  for (const QuotientRow& row : quotient().residual) {
    const std::string id = quotient_row_id(row);
    EXPECT_EQ(parse_quotient_row_id(id), row);
  }
  EXPECT_THROW(parse_quotient_row_id("t1<=m7+m2"), std::invalid_argument);
  EXPECT_THROW(parse_quotient_row_id("x1<=0"), std::invalid_argument);
  EXPECT_THROW(parse_quotient_row_id("t01<=0"), std::invalid_argument);
  EXPECT_THROW(parse_quotient_row_id("t1<="), std::invalid_argument);
}

TEST(Board15Dual, DiscoveredAndVerified) {
  const Board15Report& r = report();
  EXPECT_TRUE(r.counts_ok);
  EXPECT_TRUE(r.farkas.ok) << r.farkas.reason;
  EXPECT_TRUE(r.rows_regenerated);
  EXPECT_TRUE(r.domination.ok) << r.domination.reason;
  EXPECT_TRUE(r.lift.ok);
  EXPECT_TRUE(r.lift.images_regenerated);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.domination.min_slack, 0);
  EXPECT_EQ(r.lift.min_slack, r.domination.min_slack);
  EXPECT_GT(r.domination.support, 0);
  EXPECT_LE(r.domination.support, 27);
}

TEST(Board15Dual, StoredCertificateReverifies) {
  const Board15Report again = verify_board15_certificate(report().certificate);
  EXPECT_TRUE(again.ok());
}

TEST(Board15Dual, ZeroMultipliersRejected) {
  FarkasCertificate zero;
  zero.label = "board15";
  const Domination15 d = verify_domination15(quotient(), zero);
  EXPECT_FALSE(d.ok);
  EXPECT_NE(d.reason.find("below 300"), std::string::npos);
  EXPECT_FALSE(verify_board15_certificate(zero).ok());
}

TEST(Board15Dual, TamperedCertificatesRejected) {
  const FarkasCertificate& good = report().certificate;
  FarkasCertificate doubled = good;
  doubled.denominator *= 2;
  EXPECT_FALSE(verify_domination15(quotient(), doubled).ok);

  FarkasCertificate negative = good;
  negative.rows.front().second = -1;
  EXPECT_FALSE(verify_domination15(quotient(), negative).ok);

  FarkasCertificate inflated = good;
  for (auto& [id, n] : inflated.rows) n *= 3;
  EXPECT_FALSE(verify_domination15(quotient(), inflated).ok);  // missing loads exceed 625

  // A well-formed row that is not regenerated.
  QuotientRow forged;
  forged.kind = TraceKind::Triple;
  forged.orbit = 0;
  ASSERT_LT(quotient().index_of(forged), 0);
  FarkasCertificate fake = good;
  fake.rows.emplace_back(quotient_row_id(forged), 1);
  EXPECT_FALSE(verify_domination15(quotient(), fake).ok);
  EXPECT_FALSE(verify_board15_certificate(fake).ok());

  FarkasCertificate relabelled = good;
  relabelled.label = "board11";
  EXPECT_FALSE(verify_domination15(quotient(), relabelled).ok);
}

TEST(Board15Dual, LiftedCoefficientsDominateLabelledObjective) {
  const Lift15 l = lift_certificate15(group(), rows(), quotient(), report().certificate);
  EXPECT_TRUE(l.ok);
  FarkasCertificate halved = report().certificate;
  halved.denominator *= 2;
  EXPECT_FALSE(lift_certificate15(group(), rows(), quotient(), halved).ok);
}

TEST(Board15Layer, AssemblyConstants) {
  const LayerAssembly a = layer_assembly(3);
  EXPECT_EQ(a.triple_multiplicity, 2);
  EXPECT_EQ(a.pair_multiplicity, 3);
  EXPECT_EQ(a.missing_multiplicity, 1);
  EXPECT_EQ(a.triple_coefficient, Rational(24, 25));
  EXPECT_EQ(a.pair_coefficient, Rational(432, 625));
  // A trace meeting z of the four columns lies in C(4 - z, 3 - z) three-column boards.
  EXPECT_EQ(BigInt(a.triple_multiplicity), binomial(2, 1));
  EXPECT_EQ(BigInt(a.pair_multiplicity), binomial(3, 2));
}
