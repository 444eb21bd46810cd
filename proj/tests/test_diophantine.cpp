#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "singlab/diophantine.hpp"
#include "singlab/report.hpp"

using namespace singlab;

namespace {

Vec scalar(double x) { return Vec::Constant(1, x); }

const double kGolden = (std::sqrt(5.0) - 1) / 2;

Json oracle_panel() {
  std::ifstream in(std::string(SINGLAB_TEST_DATA) + "/oracle_panel.json");
  return Json::parse(in);
}

}  // namespace

TEST(DirichletBound, Examples) {
  EXPECT_EQ(dirichlet_bound(10, 1), 10);
  EXPECT_EQ(dirichlet_bound(10, 2), 3);
  EXPECT_EQ(dirichlet_bound(8, 3), 2);
  EXPECT_EQ(dirichlet_bound(7.99, 3), 1);
  EXPECT_EQ(dirichlet_bound(1e6, 2), 1000);
  EXPECT_EQ(dirichlet_bound(1e6, 3), 100);
  EXPECT_EQ(dirichlet_bound(1, 4), 1);
  EXPECT_THROW(dirichlet_bound(0.5, 1), Error);
}

TEST(DirichletTest, SmallExamples) {
  // Best q ≤ 3 for 0.3 is q = 3 with |0.9 - 1| = 0.1, against the target ε/3.
  EXPECT_TRUE(dirichlet_test({scalar(0.3), 0.31, 3}).solvable);
  EXPECT_FALSE(dirichlet_test({scalar(0.3), 0.29, 3}).solvable);
  const auto r = dirichlet_test({scalar(0.25), 0.01, 4});
  ASSERT_TRUE(r.solvable);
  EXPECT_EQ(r.witness->q, (std::vector<long long>{4}));
  EXPECT_EQ(r.witness->p, -1);
  EXPECT_THROW(dirichlet_test({scalar(0.3), 0.0, 3}), Error);
  EXPECT_THROW(dirichlet_test({scalar(0.3), 1.5, 3}), Error);
  EXPECT_THROW(dirichlet_test({scalar(NAN), 0.5, 3}), Error);
}

TEST(DirichletTest, EpsilonOneAlwaysSolvable) {
  Rng rng(41);
  for (int d = 1; d <= 3; ++d)
    for (int c = 0; c < 200; ++c) {
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-2, 2);
      const double N = std::floor(std::exp(rng.uniform(0.0, std::log(d == 3 ? 5000.0 : 20000.0))));
      ASSERT_TRUE(dirichlet_test({x, 1.0, std::max(1.0, N)}).solvable) << "d=" << d << " N=" << N;
    }
}

TEST(DirichletTest, WitnessesAreValid) {
  Rng rng(42);
  for (int c = 0; c < 500; ++c) {
    const int d = 1 + rng.below(3);
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform();
    const double N = 1 + rng.below(3000);
    const double eps = rng.uniform(0.05, 1.0);
    const auto r = dirichlet_test({x, eps, N});
    if (!r.solvable) continue;
    const auto& w = *r.witness;
    long long norm = 0;
    double val = w.p;
    for (int i = 0; i < d; ++i) {
      norm = std::max(norm, std::llabs(w.q[i]));
      val += w.q[i] * x[i];
    }
    EXPECT_GE(norm, 1);
    EXPECT_LE(norm, dirichlet_bound(N, d));
    EXPECT_LE(std::abs(val), eps / N * (1 + 1e-12));
    EXPECT_NEAR(std::abs(val), w.value, 1e-12);
  }
}

TEST(DirichletTest, MonotoneInEpsilon) {
  Rng rng(43);
  for (int c = 0; c < 300; ++c) {
    Vec x(2);
    x << rng.uniform(), rng.uniform();
    const double N = 1 + rng.below(2000);
    bool prev = false;
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 1.0}) {
      const bool now = dirichlet_test({x, eps, N}).solvable;
      EXPECT_TRUE(!prev || now);
      prev = now;
    }
  }
}

TEST(DirichletRatio, AgreesWithDecisionProcedure) {
  Rng rng(44);
  for (int c = 0; c < 200; ++c) {
    const Vec x = scalar(rng.uniform());
    const double N = 1 + rng.below(5000);
    const double r = dirichlet_ratio(x, N);
    EXPECT_LE(r, 1.0);
    if (r < 0.99) {
      EXPECT_TRUE(dirichlet_test({x, r * (1 + 1e-9), N}).solvable);
    }
    if (r > 0.02) {
      EXPECT_FALSE(dirichlet_test({x, r * (1 - 1e-6), N}).solvable);
    }
  }
}

TEST(DirichletRatio, GoldenRatioMatchesOracle) {
  const Json panel = oracle_panel();
  for (const auto& row : panel["golden"]["thresholds"]) {
    const double N = row["N"], expect = row["eps_star"];
    EXPECT_NEAR(dirichlet_ratio(scalar(kGolden), N), expect, 1e-6 * expect) << "N=" << N;
  }
  const double lo = panel["golden"]["liminf"], hi = panel["golden"]["limsup"];
  EXPECT_NEAR(lo, 1 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(hi, (1 + std::sqrt(5.0)) / (2 * std::sqrt(5.0)), 1e-15);
}

TEST(DirichletRatio, RationalsAreCertified) {
  const Json panel = oracle_panel();
  for (const auto& row : panel["panel"]) {
    if (row["kind"] != "rational") continue;
    const std::string s = row["x"];
    const auto slash = s.find('/');
    const long long a = std::stoll(s.substr(0, slash)), q = std::stoll(s.substr(slash + 1));
    const Vec x = scalar(static_cast<double>(a) / q);
    EXPECT_EQ(row["denominator"].get<long long>(), q);
    const auto r = dirichlet_test({x, 0.01, static_cast<double>(q)});
    ASSERT_TRUE(r.solvable) << s;
    EXPECT_LE(r.witness->value, 1e-12);
    EXPECT_LE(dirichlet_ratio(x, 10.0 * q), 1e-9);
  }
}

TEST(ContinuedFraction, QuadraticPanelOracle) {
  const Json panel = oracle_panel();
  for (const auto& row : panel["panel"]) {
    if (row["kind"] != "quadratic") continue;
    const long long a = row["partial_quotient"];
    const double x = std::stod(row["x"].get<std::string>());
    // Each term amplifies the rounding of x by about a², so read only the trustworthy prefix.
    const int terms = std::min(8, 1 + static_cast<int>(6.5 / std::log10(a + 1.0)));
    const auto cf = continued_fraction(x, terms);
    ASSERT_EQ(cf.size(), static_cast<std::size_t>(terms));
    EXPECT_EQ(cf[0], 0);
    for (std::size_t i = 1; i < cf.size(); ++i) EXPECT_EQ(cf[i], a) << row["label"];
  }
  const auto q = convergent_denominators(continued_fraction(kGolden, 20));
  const auto& ref = panel["golden"]["convergent_denominators"];
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(q[i], ref[i].get<long long>());
}

TEST(ContinuedFraction, TerminatesOnRationals) {
  EXPECT_EQ(continued_fraction(0.375, 10), (std::vector<long long>{0, 2, 1, 2}));
  EXPECT_EQ(convergent_denominators({0, 2, 1, 2}), (std::vector<long long>{1, 2, 3, 8}));
}

TEST(Improvability, GoldenAndRational) {
  const std::vector<double> eps = {0.01, 0.1, 0.4, 0.8};
  std::vector<double> N;
  for (int i = 0; i < 8; ++i) N.push_back(10 * std::pow(10.0, i / 2.0));
  const auto g = improvability_profile(scalar(kGolden), eps, N);
  ASSERT_TRUE(g.score.has_value());
  EXPECT_EQ(*g.score, 0.8);
  EXPECT_EQ(g.tail_start, 4u);
  for (std::size_t k = 0; k < 3; ++k) ASSERT_TRUE(g.first_failure[k].has_value());
  EXPECT_FALSE(g.first_failure[3].has_value());
  const auto r = improvability_profile(scalar(0.5), eps, N);
  EXPECT_EQ(*r.score, 0.01);
  EXPECT_LT(r.mean_ratio, g.mean_ratio);
  EXPECT_THROW(improvability_profile(scalar(0.5), eps, {10, 5}), Error);
  EXPECT_THROW(improvability_profile(scalar(0.5), eps, N, 8), Error);
}

TEST(Scan, RootCylinderAtDimensionExponent) {
  const auto ifs = make_preset("cantor3");
  const auto rep = fractal_scan(ifs, 0, {0.1, 0.5}, {10, 100, 1000}, ifs.sim_dim());
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_TRUE(rep.rows[0].word.empty());
  EXPECT_NEAR(rep.rows[0].diam_pow, 1.0, 1e-15);
  EXPECT_FALSE(rep.truncated);
}

TEST(Scan, SummaryInvariants) {
  const auto ifs = make_preset("cantor3x3");
  const std::vector<double> eps = {0.1, 0.2, 0.4, 0.8};
  const auto rep = fractal_scan(ifs, 2, eps, {10, 100, 1000, 10000}, 0.0, std::vector<double>{0.63, 1.26});
  ASSERT_EQ(rep.rows.size(), 16u);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    EXPECT_GE(rep.fraction_improvable[k], 0.0);
    EXPECT_LE(rep.fraction_improvable[k], 1.0 + 1e-12);
    if (k > 0) {
      EXPECT_GE(rep.fraction_improvable[k], rep.fraction_improvable[k - 1] - 1e-12);
    }
  }
  EXPECT_NEAR(rep.cover_sum[0], rep.flagged_sum, 1e-15);
  ASSERT_TRUE(rep.dimension_bound.has_value());
  EXPECT_NEAR(*rep.dimension_bound, ifs.sim_dim() - 1.26 / 3, 1e-12);
}

TEST(Scan, BudgetRaisesPartialResult) {
  const auto ifs = make_preset("cantor3x3");
  try {
    fractal_scan(ifs, 3, {0.5}, {10, 100}, 0.0, std::nullopt, 10);
    FAIL();
  } catch (const PartialResult<ScanReport>& e) {
    EXPECT_TRUE(e.partial().truncated);
    EXPECT_EQ(e.partial().rows.size(), 10u);
  }
}

TEST(Scan, ThreadCountDoesNotChangeRows) {
  const auto ifs = make_preset("sierpinski3");
  const auto a = fractal_scan(ifs, 3, {0.2, 0.8}, {10, 100, 1000}, 0.0, std::nullopt, 1'000'000, 1);
  const auto b = fractal_scan(ifs, 3, {0.2, 0.8}, {10, 100, 1000}, 0.0, std::nullopt, 1'000'000, 4);
  EXPECT_EQ(dump(to_json(a, true)), dump(to_json(b, true)));
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 4.5 / std::sqrt(22.5), 1e-12);
  EXPECT_EQ(spearman({1, 1, 1}, {1, 2, 3}), 0.0);
  EXPECT_THROW(spearman({1}, {1}), Error);
}

TEST(Dani, RationalsDivergeAndBadlyApproximablesDoNot) {
  const auto ifs = make_preset("interval2");
  const auto p = HeightParams::make(0.5, 0.5, {1.0}, NAN);
  const ExcursionSpec spec{10.0, 24, 1, 0.5, 0.0};
  const std::vector<std::pair<std::string, Vec>> panel = {{"half", scalar(0.5)},
                                                          {"twofifths", scalar(0.4)},
                                                          {"golden", scalar(kGolden)},
                                                          {"silver", scalar(std::sqrt(2.0) - 1)}};
  std::vector<double> N;
  for (int i = 0; i < 8; ++i) N.push_back(10 * std::pow(10.0, i / 2.0));
  const auto rep = dani_crosscheck(ifs, panel, p, spec, {0.05, 0.2}, N, 0.05);
  ASSERT_EQ(rep.points.size(), 4u);
  EXPECT_TRUE(rep.points[0].divergent);
  EXPECT_TRUE(rep.points[0].improvable);
  EXPECT_FALSE(rep.points[2].divergent);
  EXPECT_FALSE(rep.points[2].improvable);
  EXPECT_GT(rep.spearman, 0.5);
  EXPECT_DOUBLE_EQ(rep.agreement, 1.0);
}
