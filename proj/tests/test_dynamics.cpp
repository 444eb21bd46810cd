#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "singlab/dynamics.hpp"

using namespace singlab;

namespace {

HeightParams line_params() { return HeightParams::make(0.5, 0.5, {1.0}, NAN); }

Vec scalar(double x) { return Vec::Constant(1, x); }

// Bad words by exhaustive enumeration of Λ^{Nk}.
std::set<Word> brute_bad_words(const IfsSystem& ifs, const HeightParams& p, const ExcursionSpec& spec) {
  std::set<Word> out;
  for (const auto& w : all_words(ifs.size(), spec.N * spec.k)) {
    int bad = 0;
    for (int l = 1; l <= spec.N; ++l) {
      const Word prefix(w.begin(), w.begin() + l * spec.k);
      if (epoch_height(ifs, prefix, Lattice::standard(ifs.dim() + 1), p) > spec.M) ++bad;
    }
    if (bad > spec.delta * spec.N) out.insert(w);
  }
  return out;
}

}  // namespace

TEST(DivergenceFraction, Examples) {
  EXPECT_DOUBLE_EQ(divergence_fraction(std::vector<double>{1, 5, 10, 20}, 10.0), 0.75);
  EXPECT_DOUBLE_EQ(divergence_fraction(std::vector<double>{11, 12}, 10.0), 0.0);
  EXPECT_THROW(divergence_fraction(std::vector<double>{}, 1.0), Error);
}

TEST(HausdorffSum, FullTreeOfMiddleThirds) {
  const auto ifs = make_preset("cantor3");
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(hausdorff_sum(ifs, all_words(2, n), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(hausdorff_sum(ifs, all_words(2, 3), 0.2), 8 * std::pow(1.0 / 27, ifs.sim_dim() - 0.2), 1e-12);
  EXPECT_EQ(hausdorff_sum(ifs, std::vector<Word>{}, 0.0), 0.0);
}

TEST(HausdorffSum, PrefixFormMatchesExpansion) {
  Rng rng(31);
  for (const char* name : {"cantor3x3", "sierpinski3"}) {
    const auto ifs = make_preset(name);
    for (int c = 0; c < 20; ++c) {
      BadWordSet set;
      set.full_depth = 4;
      for (int j = 0; j < 3; ++j) {
        Word p;
        const int len = 1 + rng.below(4);
        for (int i = 0; i < len; ++i) p.push_back(rng.below(ifs.size()));
        set.prefixes.push_back(p);
      }
      const double gamma = rng.uniform(-0.3, 0.5);
      const auto words = set.expand(ifs.size());
      EXPECT_EQ(words.size(), set.word_count(ifs.size()));
      EXPECT_NEAR(hausdorff_sum(ifs, set, gamma), hausdorff_sum(ifs, words, gamma), 1e-12);
    }
  }
}

TEST(MomentIdentity, ExhaustiveSumMatchesPower) {
  for (const char* name : {"cantor3", "cantor3x3", "sierpinski3", "interval2"}) {
    const auto ifs = make_preset(name);
    for (double gamma : {-1.0, -0.5, 0.0, 0.5, 1.0})
      for (int n = 0; n <= 8; ++n) {
        if (std::pow(ifs.size(), n) > 1e6) continue;
        const auto m = moment_identity_check(ifs, gamma, n);
        EXPECT_NEAR(m.lhs, m.rhs, 1e-12 * m.rhs) << name << " gamma=" << gamma << " n=" << n;
      }
  }
  const auto mixed = make_homogeneous(0.3, 1.0, 5);
  const auto m = moment_identity_check(mixed, 0.0, 0);
  EXPECT_DOUBLE_EQ(m.lhs, 1.0);
}

TEST(BadWords, ThresholdExtremes) {
  const auto ifs = make_preset("cantor3");
  const auto p = line_params();
  ExcursionSpec spec{1.0, 5, 1, 0.5, 0.0};
  const auto all = enumerate_bad_words(ifs, Lattice::standard(2), p, spec);
  EXPECT_EQ(all.word_count(2), 32u);
  spec.M = 1e9;
  const auto none = enumerate_bad_words(ifs, Lattice::standard(2), p, spec);
  EXPECT_TRUE(none.prefixes.empty());
}

TEST(BadWords, SingleEpochNeedsOneBadVisit) {
  const auto ifs = make_preset("cantor3");
  const auto p = line_params();
  ExcursionSpec spec{2.3, 1, 3, 0.9, 0.0};
  const auto set = enumerate_bad_words(ifs, Lattice::standard(2), p, spec);
  for (const auto& w : set.expand(2)) EXPECT_GT(epoch_height(ifs, w, Lattice::standard(2), p), spec.M);
  EXPECT_EQ(set.expand(2).size(), brute_bad_words(ifs, p, spec).size());
}

TEST(BadWords, BranchAndBoundMatchesBruteForce) {
  const auto p = line_params();
  for (const char* name : {"cantor3", "interval2"}) {
    const auto ifs = make_preset(name);
    for (double M : {2.2, 2.4, 2.8})
      for (double delta : {0.3, 0.5, 0.7}) {
        const ExcursionSpec spec{M, 5, 2, delta, 0.0};
        const auto set = enumerate_bad_words(ifs, Lattice::standard(2), p, spec);
        const auto words = set.expand(ifs.size());
        EXPECT_EQ(std::set<Word>(words.begin(), words.end()), brute_bad_words(ifs, p, spec))
            << name << " M=" << M << " delta=" << delta;
      }
  }
}

TEST(BadWords, BudgetRaisesPartialResult) {
  const auto ifs = make_preset("cantor3");
  const ExcursionSpec spec{2.2, 8, 1, 0.5, 0.0};
  try {
    enumerate_bad_words(ifs, Lattice::standard(2), line_params(), spec, 10);
    FAIL();
  } catch (const PartialResult<BadWordSet>& e) {
    EXPECT_TRUE(e.partial().truncated);
  }
}

TEST(Orbit, RationalPointEscapes) {
  const auto ifs = make_preset("interval2");
  const ExcursionSpec spec{10.0, 30, 1, 0.5, 0.0};
  const auto tr = orbit_heights(ifs, scalar(0.5), Lattice::standard(2), line_params(), spec);
  ASSERT_EQ(tr.epochs.size(), 30u);
  EXPECT_GT(tr.epochs.back().f, 10.0);
  EXPECT_GT(tr.epochs.back().f, tr.epochs[5].f);
  EXPECT_NEAR(tr.initial_height, 2.5, 1e-12);
  EXPECT_LT(divergence_fraction(tr, 10.0), 1.0);
}

TEST(Orbit, GoldenRatioStaysBounded) {
  const auto ifs = make_preset("interval2");
  const ExcursionSpec spec{10.0, 30, 1, 0.5, 0.0};
  const auto tr = orbit_heights(ifs, scalar((std::sqrt(5.0) - 1) / 2), Lattice::standard(2), line_params(), spec);
  for (const auto& e : tr.epochs) EXPECT_LT(e.f, 4.0) << "epoch " << e.l;
  EXPECT_DOUBLE_EQ(divergence_fraction(tr, 10.0), 1.0);
  EXPECT_TRUE(tr.certified);
}

TEST(Orbit, EpochRatiosFollowTheCocycle) {
  const auto ifs = make_preset("cantor3x3");
  const auto p = HeightParams::make(0.5, 0.5, {0.63, 1.26}, NAN);
  Vec x(2);
  x << 0.25, 0.75;
  const auto tr = orbit_heights(ifs, x, Lattice::standard(3), p, {10.0, 4, 2, 0.5, 0.0});
  for (const auto& e : tr.epochs) EXPECT_NEAR(e.rho, std::pow(3.0, -2 * e.l), 1e-15);
}

TEST(Contraction, DriftIsExact) {
  const auto ifs = make_preset("cantor3x3");
  const auto p = HeightParams::make(0.5, 0.5, {std::log(2.0) / std::log(3.0), ifs.sim_dim()}, NAN);
  const auto panel = random_lattice_panel(2, 6, 2.0, 3);
  for (int k = 1; k <= 2; ++k) {
    const auto r = contraction_audit(ifs, p, k, panel, 2, 7);
    EXPECT_NEAR(r.drift, r.drift_closed, 1e-12 * r.drift_closed);
  }
}

TEST(Contraction, FitUsesOnlyHeightsAboveT) {
  const auto ifs = make_preset("cantor3");
  const auto p = line_params();
  auto panel = random_lattice_panel(1, 12, 3.0, 5);
  panel.insert(panel.begin(), Lattice::standard(2));
  ContractionOptions opt;
  opt.quantile = 0.5;
  const auto r = contraction_audit(ifs, p, 2, panel, 4, 11, opt);
  ASSERT_EQ(r.samples.size(), panel.size());
  int fitted = 0;
  for (const auto& s : r.samples) {
    EXPECT_EQ(s.in_fit, s.f > r.T);
    fitted += s.in_fit;
  }
  EXPECT_EQ(fitted, r.fitted);
  EXPECT_FALSE(r.samples[0].in_fit);
  EXPECT_EQ(r.violations, 0);
  EXPECT_GE(r.c, 1.0);
}

TEST(Contraction, ThreadCountDoesNotChangeResult) {
  const auto ifs = make_preset("cantor3");
  const auto panel = random_lattice_panel(1, 8, 2.0, 5);
  ContractionOptions a, b;
  b.threads = 4;
  const auto r1 = contraction_audit(ifs, line_params(), 2, panel, 3, 2, a);
  const auto r2 = contraction_audit(ifs, line_params(), 2, panel, 3, 2, b);
  EXPECT_EQ(r1.c, r2.c);
  EXPECT_EQ(r1.c_uniform, r2.c_uniform);
}

TEST(LatticePanel, UnimodularAndDeterministic) {
  const auto a = random_lattice_panel(3, 10, 4.0, 9);
  const auto b = random_lattice_panel(3, 10, 4.0, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].basis.determinant(), 1.0, 1e-9);
    EXPECT_EQ(a[i].basis, b[i].basis);
  }
}

TEST(LogLipschitz, FiniteAndAtLeastOne) {
  const auto ifs = make_preset("cantor3x3");
  const auto p = HeightParams::make(0.5, 0.5, {0.63, 1.26}, NAN);
  const double A = measure_log_lipschitz(ifs, p, random_lattice_panel(2, 5, 2.0, 1), 20, 3);
  EXPECT_TRUE(std::isfinite(A));
  EXPECT_GE(A, 1.0);
}

TEST(DimensionEstimateRun, LowThresholdGivesClosedForm) {
  const auto ifs = make_preset("cantor3");
  ExcursionSpec spec{1.0, 1, 2, 0.5, 0.1};
  const auto est = dimension_estimate(ifs, Lattice::standard(2), line_params(), spec, 4);
  ASSERT_EQ(est.sums.size(), 4u);
  const double one = 2 * std::pow(1.0 / 3, ifs.sim_dim() - 0.1);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(est.sums[i], std::pow(one, 2.0 * est.N[i]), 1e-12);
  EXPECT_NEAR(est.log_rate, 2 * std::log(one), 1e-9);
  EXPECT_FALSE(est.strictly_decreasing);
}

TEST(DimensionEstimateRun, TruncationIsReported) {
  const auto ifs = make_preset("cantor3");
  const auto est = dimension_estimate(ifs, Lattice::standard(2), line_params(), {2.2, 1, 1, 0.5, 0.0}, 12, 200);
  EXPECT_TRUE(est.truncated);
  EXPECT_LT(est.sums.size(), 12u);
}

TEST(Contraction, CriterionPairsCAndFactorAtOneGamma) {
  const auto ifs = make_preset("cantor3x3");
  const auto p = HeightParams::make(0.5, 0.5, {std::log(2.0) / std::log(3.0), ifs.sim_dim()}, NAN);
  const auto r = contraction_audit(ifs, p, 2, random_lattice_panel(2, 8, 4.0, 2), 2, 3);
  ASSERT_FALSE(r.sweep.empty());
  double best = INFINITY;
  for (const auto& cp : r.sweep) {
    best = std::min(best, cp.c * cp.factor);
    EXPECT_LE(cp.c, r.c_uniform);
  }
  EXPECT_DOUBLE_EQ(r.best_c * r.best_factor, best);
  EXPECT_EQ(r.criterion_fitted, best < 1.0);
}
