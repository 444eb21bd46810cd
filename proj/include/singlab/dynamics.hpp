#pragma once

#include <cstdint>
#include <vector>

#include "singlab/exterior.hpp"
#include "singlab/ifs.hpp"

namespace singlab {

struct ExcursionSpec {
  double M = 10.0;
  int N = 1;
  int k = 1;
  double delta = 0.5;
  double gamma = 0.0;
  void validate() const;
};

struct Epoch {
  int l = 0;
  double rho = 0.0;
  double f = 0.0;
  std::vector<double> phi;
};

struct OrbitTrace {
  Vec point;
  double initial_height = 0.0;  // f(x0)
  std::vector<Epoch> epochs;    // l = 1..N
  bool certified = true;
};

OrbitTrace orbit_heights(const IfsSystem& ifs, const Vec& x, const Lattice& x0, const HeightParams& params,
                         const ExcursionSpec& spec);
double divergence_fraction(const OrbitTrace& trace, double M);
double divergence_fraction(const std::vector<double>& heights, double M);

// f(g_ρ u(x) y) with ρ = ratio of w and x its representative point.
double epoch_height(const IfsSystem& ifs, const Word& w, const Lattice& y, const HeightParams& params);

// Accepted prefixes; each stands for all of its completions to full_depth.
struct BadWordSet {
  std::vector<Word> prefixes;
  int full_depth = 0;
  long long nodes = 0;
  bool truncated = false;
  std::size_t word_count(int alphabet) const;
  std::vector<Word> expand(int alphabet) const;
};

// Throws PartialResult<BadWordSet> once more than budget_nodes nodes are visited.
BadWordSet enumerate_bad_words(const IfsSystem& ifs, const Lattice& x0, const HeightParams& params,
                               const ExcursionSpec& spec, long long budget_nodes = 10'000'000);

double hausdorff_sum(const IfsSystem& ifs, const std::vector<Word>& words, double gamma);
double hausdorff_sum(const IfsSystem& ifs, const BadWordSet& set, double gamma);

struct MomentCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};
MomentCheck moment_identity_check(const IfsSystem& ifs, double gamma, int n);

struct ContractionOptions {
  double quantile = 0.25;  // T as a quantile of f over the panel
  double delta = 0.95;     // δ in the contraction criterion
  int gamma_grid = 20;     // γ values in (0, ϱβ) searched by the criterion
  double A = 1.0;          // log-Lipschitz slack for the proof constant 2(cA)^3
  int threads = 1;
};

struct ContractionSample {
  double f = 0.0;
  double lhs = 0.0;
  double stderr_ = 0.0;
  double rhs_shape = 0.0;  // f(y)·(∫ρ(·,k)dμ)^{ϱβ-γ}
  double ratio = 0.0;
  bool in_fit = false;
  bool satisfied = false;  // lhs - 3·stderr ≤ c·rhs_shape
};

struct CriterionPoint {
  double gamma = 0.0;
  double c = 0.0;      // fitted at this γ
  double xi = 0.0;     // Σρ_i^{s-γ}
  double zeta = 0.0;   // (Σρ_i^{s+1})^{ϱβ-γ}
  double factor = 0.0; // (ζ^δ ξ^{1-δ})^k
};

struct ContractionReport {
  int k = 0;
  double gamma = 0.0;
  double drift = 0.0;        // Σ_{Λ^k} ρ_ω^{s+1}
  double drift_closed = 0.0; // (Σρ_i^{s+1})^k
  double c = 1.0;
  double T = 0.0;
  int fitted = 0;
  int violations = 0;
  std::vector<ContractionSample> samples;
  bool margulis_criterion = false;  // c·drift^{ϱβ} < 1
  double margulis_value = 0.0;
  std::vector<CriterionPoint> sweep;
  double c_uniform = 1.0;                  // max fitted c over the sweep
  double best_gamma = 0.0;                 // sweep γ minimizing c(γ)·(ζ^δ ξ^{1-δ})^k
  double best_c = 0.0;                     // c at best_gamma
  double best_factor = 0.0;                // (ζ^δ ξ^{1-δ})^k at best_gamma
  bool criterion_fitted = false;           // best_c·best_factor < 1
  bool criterion_proof_constant = false;   // 2(c(γ)·A)^3·factor(γ) < 1 for some swept γ
  double delta = 0.0;
  double A = 1.0;
};

ContractionReport contraction_audit(const IfsSystem& ifs, const HeightParams& params, int k,
                                    const std::vector<Lattice>& y_samples, int mc_per_cylinder, std::uint64_t seed,
                                    const ContractionOptions& opts = {});

// Unimodular lattices rotation·diag·unipotent·Z^{d+1} with cusp depth up to max_depth.
std::vector<Lattice> random_lattice_panel(int d, int count, double max_depth, std::uint64_t seed);

// max f(u(x)y)/f(y) and its inverse over ‖x‖ ≤ 2R.
double measure_log_lipschitz(const IfsSystem& ifs, const HeightParams& params, const std::vector<Lattice>& panel,
                             int x_samples, std::uint64_t seed);

struct DimensionEstimate {
  std::vector<int> N;
  std::vector<double> sums;
  std::vector<long long> nodes;
  double log_rate = 0.0;  // least-squares slope of log(sum) against N
  bool strictly_decreasing = false;
  bool truncated = false;
};

DimensionEstimate dimension_estimate(const IfsSystem& ifs, const Lattice& x0, const HeightParams& params,
                                     ExcursionSpec spec, int N_max, long long budget_nodes = 10'000'000);

}  // namespace singlab
