#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "emc4/exact_lp.hpp"

using namespace emc4;

namespace {

Rational q(long long n, long long d = 1) { return Rational(BigInt(n), BigInt(d)); }

LinearRow make_row(const std::string& id, std::vector<std::pair<int, Rational>> c, Rational rhs) {
  LinearRow r;
  r.id = id;
  r.coeffs = std::move(c);
  r.rhs = std::move(rhs);
  r.tag = "test";
  return r;
}

RationalSystem one_variable(Rational bound) {
  RationalSystem s;
  s.add_variable("x");
  s.set_objective(0, 1);
  s.set_bound(bound);
  s.add_row(make_row("half", {{0, q(1)}}, q(1, 2)));
  return s;
}

// Exact Gaussian elimination; empty when singular.
std::vector<Rational> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return {};
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

// LP optimum by enumerating every vertex of the polytope (rows plus box).
std::optional<Rational> vertex_optimum(const RationalSystem& s) {
  const int n = s.variable_count();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& r : s.rows()) {
    std::vector<Rational> a(static_cast<std::size_t>(n), Rational(0));
    for (const auto& [j, v] : r.coeffs) a[static_cast<std::size_t>(j)] = v;
    rows.push_back(a);
    rhs.push_back(r.rhs);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> a(static_cast<std::size_t>(n), Rational(0));
    a[static_cast<std::size_t>(j)] = 1;
    rows.push_back(a);
    rhs.push_back(1);
    a[static_cast<std::size_t>(j)] = -1;
    rows.push_back(a);
    rhs.push_back(0);
  }
  std::optional<Rational> best;
  const int total = static_cast<int>(rows.size());
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == n) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (int i : pick) {
        a.push_back(rows[static_cast<std::size_t>(i)]);
        b.push_back(rhs[static_cast<std::size_t>(i)]);
      }
      auto x = solve_square(a, b);
      if (x.empty() || !satisfies_rows(s, x)) return;
      const Rational v = objective_value(s, x);
      if (!best || v > *best) best = v;
      return;
    }
    for (int i = start; i < total; ++i) {
      pick[static_cast<std::size_t>(k)] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return best;
}

RationalSystem random_system(std::mt19937& rng, int n, int m) {
  RationalSystem s;
  std::uniform_int_distribution<int> coef(-3, 3), obj(-4, 6), rhs(-1, 4);
  for (int j = 0; j < n; ++j) {
    s.add_variable("v" + std::to_string(j));
    s.set_objective(j, q(obj(rng)));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, Rational>> c;
    for (int j = 0; j < n; ++j) c.emplace_back(j, q(coef(rng)));
    s.add_row(make_row("r" + std::to_string(i), c, q(rhs(rng), 2)));
  }
  return s;
}

}  // namespace

TEST(ExactLp, BoundSlackCase) {
  auto s = one_variable(1);
  const auto out = solve_with_certificate(s);
  ASSERT_EQ(out.status, LpStatus::Certified);
  const auto v = verify_certificate(s, out.certificate);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.gap, q(1, 2));
  // The upper bound alone also certifies d^T x <= 1.
  FarkasCertificate mu_only;
  mu_only.denominator = 3;
  mu_only.upper = {{"x", BigInt(3)}};
  EXPECT_TRUE(verify_certificate(s, mu_only).ok);
}

TEST(ExactLp, BoundViolatedWitness) {
  for (bool exact_only : {false, true}) {
    auto s = one_variable(q(1, 3));
    SolveOptions o;
    o.exact_only = exact_only;
    const auto out = solve_with_certificate(s, nullptr, o);
    ASSERT_EQ(out.status, LpStatus::BoundViolated);
    ASSERT_EQ(out.witness.size(), 1u);
    EXPECT_EQ(out.witness[0], q(1, 2));
    EXPECT_TRUE(satisfies_rows(s, out.witness));
  }
}

TEST(ExactLp, InfeasibleRowsGiveFarkasRay) {
  RationalSystem s;
  s.add_variable("x");
  s.add_variable("y");
  s.set_objective(0, 1);
  s.add_row(make_row("neg", {{0, q(1)}, {1, q(-1)}}, q(-2)));
  const auto out = solve_with_certificate(s);
  ASSERT_EQ(out.status, LpStatus::Infeasible);
  EXPECT_TRUE(out.certificate.infeasibility);
  const auto v = verify_certificate(s, out.certificate);
  EXPECT_TRUE(v.ok);
  EXPECT_GT(v.gap, 0);
}

TEST(ExactLp, ZeroCertificateRejected) {
  auto s = one_variable(1);
  FarkasCertificate zero;
  EXPECT_FALSE(verify_certificate(s, zero).ok);
}

TEST(ExactLp, UnknownRowIsHardFailure) {
  auto s = one_variable(1);
  FarkasCertificate c;
  c.rows = {{"nope", BigInt(1)}};
  EXPECT_THROW(verify_certificate(s, c), ProofError);
  c.rows.clear();
  c.upper = {{"z", BigInt(1)}};
  EXPECT_THROW(verify_certificate(s, c), ProofError);
}

TEST(ExactLp, RejectsNegativeOrRepeatedMultipliers) {
  auto s = one_variable(1);
  FarkasCertificate c;
  c.rows = {{"half", BigInt(-1)}};
  c.upper = {{"x", BigInt(2)}};
  EXPECT_FALSE(verify_certificate(s, c).ok);
  c.rows = {{"half", BigInt(1)}, {"half", BigInt(1)}};
  EXPECT_FALSE(verify_certificate(s, c).ok);
  c.denominator = 0;
  c.rows.clear();
  EXPECT_FALSE(verify_certificate(s, c).ok);
}

TEST(ExactLp, TightCertificateBreaksOnDecrement) {
  RationalSystem s;
  s.add_variable("x");
  s.add_variable("y");
  s.set_objective(0, 2);
  s.set_objective(1, 3);
  s.add_row(make_row("a", {{0, q(1)}, {1, q(1)}}, q(1)));
  s.add_row(make_row("b", {{1, q(2)}}, q(1)));
  s.set_bound(q(5, 2));
  const auto out = solve_with_certificate(s);
  ASSERT_EQ(out.status, LpStatus::Certified);
  const auto v = verify_certificate(s, out.certificate);
  ASSERT_TRUE(v.ok);
  EXPECT_EQ(v.gap, 0);
  for (std::size_t i = 0; i < out.certificate.rows.size(); ++i) {
    auto t = out.certificate;
    t.rows[i].second -= 1;
    EXPECT_FALSE(verify_certificate(s, t).ok);
  }
}

TEST(ExactLp, RandomSystemsMatchVertexOracle) {
  std::mt19937 rng(12345);
  int certified = 0, violated = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    auto base = random_system(rng, n, 2 + trial % 4);
    const auto opt = vertex_optimum(base);
    for (bool exact_only : {false, true}) {
      auto s = base;
      SolveOptions o;
      o.exact_only = exact_only;
      if (!opt) {
        const auto out = solve_with_certificate(s, nullptr, o);
        ASSERT_EQ(out.status, LpStatus::Infeasible);
        EXPECT_TRUE(verify_certificate(s, out.certificate).ok);
        continue;
      }
      s.set_bound(*opt);
      auto out = solve_with_certificate(s, nullptr, o);
      ASSERT_EQ(out.status, LpStatus::Certified) << trial;
      const auto v = verify_certificate(s, out.certificate);
      EXPECT_TRUE(v.ok);
      EXPECT_EQ(v.gap, 0) << trial;
      ++certified;
      // Shuffled multiplier order gives the same verdict.
      auto shuffled = out.certificate;
      std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
      std::shuffle(shuffled.upper.begin(), shuffled.upper.end(), rng);
      const auto v2 = verify_certificate(s, shuffled);
      EXPECT_EQ(v2.ok, v.ok);
      EXPECT_EQ(v2.gap, v.gap);

      auto s2 = base;
      s2.set_bound(*opt - q(1, 7));
      out = solve_with_certificate(s2, nullptr, o);
      ASSERT_EQ(out.status, LpStatus::BoundViolated);
      EXPECT_TRUE(satisfies_rows(s2, out.witness));
      EXPECT_EQ(out.witness_value, *opt);
      ++violated;
    }
  }
  EXPECT_GT(certified, 20);
  EXPECT_GT(violated, 20);
}

TEST(ExactLp, AcceptedCertificatesHoldOnSampledPoints) {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_system(rng, 4, 3);
    const auto opt = vertex_optimum(s);
    if (!opt) continue;
    s.set_bound(*opt);
    const auto out = solve_with_certificate(s);
    ASSERT_EQ(out.status, LpStatus::Certified);
    int checked = 0;
    std::uniform_int_distribution<int> grid(0, 8);
    for (int tries = 0; checked < 100 && tries < 200000; ++tries) {
      std::vector<Rational> x;
      for (int j = 0; j < 4; ++j) x.push_back(q(grid(rng), 8));
      if (!satisfies_rows(s, x)) continue;
      EXPECT_LE(objective_value(s, x), s.bound());
      ++checked;
    }
    EXPECT_GT(checked, 0);
  }
}

namespace {

// Rows x_j <= 1/(j+2), revealed only when violated.
class CapSeparator : public RowSeparator {
 public:
  explicit CapSeparator(int n) : n_(n) {}
  std::vector<LinearRow> violated(const std::vector<double>& x, double tol, int) const override {
    std::vector<LinearRow> out;
    for (int j = 0; j < n_; ++j)
      if (x[static_cast<std::size_t>(j)] > 1.0 / (j + 2) + tol) out.push_back(row(j));
    return out;
  }
  std::vector<LinearRow> violated_exact(const std::vector<Rational>& x, int) const override {
    std::vector<LinearRow> out;
    for (int j = 0; j < n_; ++j)
      if (x[static_cast<std::size_t>(j)] > q(1, j + 2)) out.push_back(row(j));
    return out;
  }
  static LinearRow row(int j) {
    LinearRow r = make_row("cap" + std::to_string(j), {{j, q(1)}}, q(1, j + 2));
    r.meta = {"cap", "cap", {j}};
    return r;
  }

 private:
  int n_;
};

}  // namespace

TEST(ExactLp, LazyRowsAreMaterialized) {
  for (bool exact_only : {false, true}) {
    RationalSystem s;
    for (int j = 0; j < 4; ++j) {
      s.add_variable("x" + std::to_string(j));
      s.set_objective(j, 1);
    }
    s.add_row(make_row("sum", {{0, q(1)}, {1, q(1)}, {2, q(1)}, {3, q(1)}}, q(3)));
    s.set_bound(q(1, 2) + q(1, 3) + q(1, 4) + q(1, 5));
    CapSeparator sep(4);
    SolveOptions o;
    o.exact_only = exact_only;
    const auto out = solve_with_certificate(s, &sep, o);
    ASSERT_EQ(out.status, LpStatus::Certified);
    EXPECT_EQ(out.generated_rows, 4);
    EXPECT_GE(out.separation_rounds, 1);
    const auto v = verify_certificate(s, out.certificate);
    EXPECT_TRUE(v.ok);
    EXPECT_EQ(v.gap, 0);
    for (const auto& [id, num] : out.certificate.rows) EXPECT_TRUE(s.has_row(id));
  }
}

TEST(ExactLp, IterationCapIsResourceError) {
  auto s = one_variable(1);
  SolveOptions o;
  o.max_iterations = 0;
  EXPECT_THROW(solve_with_certificate(s, nullptr, o), ResourceError);
}

TEST(ExactLp, RegenerateAndMatch) {
  register_row_generator("cap", [](const RowMeta& m) {
    if (m.params.size() != 1) throw std::invalid_argument("bad cap row");
    return CapSeparator::row(m.params[0]);
  });
  RationalSystem s;
  for (int j = 0; j < 3; ++j) s.add_variable("x" + std::to_string(j));
  s.add_row(CapSeparator::row(1));
  EXPECT_TRUE(regenerate_and_match(s, "cap1"));
  LinearRow tampered = CapSeparator::row(2);
  tampered.coeffs[0].second = q(2);
  s.add_row(tampered);
  EXPECT_FALSE(regenerate_and_match(s, "cap2"));
  LinearRow broken = CapSeparator::row(0);
  broken.meta.params.clear();
  s.add_row(broken);
  EXPECT_FALSE(regenerate_and_match(s, "cap0"));
  LinearRow orphan = make_row("orphan", {{0, q(1)}}, q(1));
  orphan.meta = {"nowhere", "x", {}};
  s.add_row(orphan);
  EXPECT_THROW(regenerate_and_match(s, "orphan"), ProofError);
}

TEST(ExactLp, SystemValidation) {
  RationalSystem s;
  s.add_variable("x");
  EXPECT_THROW(s.add_variable("x"), std::invalid_argument);
  EXPECT_THROW(s.add_row(make_row("bad", {{3, q(1)}}, q(0))), std::invalid_argument);
  s.add_row(make_row("r", {{0, q(1)}, {0, q(2)}}, q(1)));
  EXPECT_THROW(s.add_row(make_row("r", {}, q(0))), std::invalid_argument);
  ASSERT_EQ(s.row("r").coeffs.size(), 1u);
  EXPECT_EQ(s.row("r").coeffs[0].second, 3);
}
