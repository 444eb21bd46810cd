#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "singlab/dynamics.hpp"
#include "singlab/exponents.hpp"
#include "singlab/ifs.hpp"

namespace singlab {

struct DirichletQuery {
  Vec x;
  double eps = 1.0;
  double N = 1.0;
};

struct DirichletWitness {
  long long p = 0;
  std::vector<long long> q;
  double value = 0.0;  // |q·x + p|
};

struct DirichletResult {
  bool solvable = false;
  std::optional<DirichletWitness> witness;
};

// Largest integer Q with Q^d ≤ N.
long long dirichlet_bound(double N, int d);
DirichletResult dirichlet_test(const DirichletQuery& query);
// N · min over 0 < ‖q‖∞ ≤ N^{1/d} of |q·x + p|.
double dirichlet_ratio(const Vec& x, double N);

struct ImprovabilityProfile {
  Vec x;
  std::vector<double> eps_ladder;
  std::vector<double> N_ladder;
  std::vector<std::vector<bool>> solvable;  // [eps][N]
  std::vector<double> ratio;                // δ_N per N
  std::vector<std::optional<double>> first_failure;
  std::size_t tail_start = 0;               // failures at N_ladder[tail_start..] persist
  std::optional<double> score;              // smallest ε with no failure on the tail
  double mean_ratio = 0.0;                  // mean of δ_N over the ladder
};

// tail_start defaults to the second half of the N ladder.
ImprovabilityProfile improvability_profile(const Vec& x, const std::vector<double>& eps_ladder,
                                           const std::vector<double>& N_ladder,
                                           std::optional<std::size_t> tail_start = std::nullopt);

struct ScanRow {
  Word word;
  Vec representative;
  std::vector<std::optional<double>> first_failure;
  std::vector<bool> improvable;  // per ε: no failure on the tail of the N ladder
  bool flagged = false;          // improvable at the smallest ε
  double diam_pow = 0.0; // diam(K_ω)^{s-γ}
};

struct ScanReport {
  int depth = 0;
  double gamma = 0.0;
  std::vector<double> eps_ladder;
  std::vector<double> N_ladder;
  std::vector<double> fraction_improvable;  // per ε
  std::vector<double> cover_sum;            // per ε, Σ diam^{s-γ} over improvable cylinders
  int flagged = 0;
  double flagged_sum = 0.0;
  std::optional<double> dimension_bound;
  std::vector<ScanRow> rows;
  bool truncated = false;
};

ScanReport fractal_scan(const IfsSystem& ifs, int depth, const std::vector<double>& eps_ladder,
                        const std::vector<double>& N_ladder, double gamma,
                        const std::optional<std::vector<double>>& alphas = std::nullopt,
                        long long budget_cylinders = 1'000'000, int threads = 1);

struct DaniPoint {
  std::string label;
  Vec x;
  double score = 0.0;        // mean Dirichlet ratio over the ladder
  std::optional<double> discrete_score;
  double min_shortest = 0.0; // min over epochs of 1/φ_1
  bool improvable = false;   // no tail failure at the smallest ε
  bool divergent = false;    // orbit ends below the cusp threshold
};

struct DaniReport {
  std::vector<DaniPoint> points;
  double spearman = 0.0;
  double agreement = 0.0;  // fraction where both detectors agree
  int epochs = 0;
  double cusp_threshold = 0.0;
};

DaniPoint dani_point(const IfsSystem& ifs, const std::string& label, const Vec& x, const HeightParams& params,
                     const ExcursionSpec& spec, const std::vector<double>& eps_ladder,
                     const std::vector<double>& N_ladder, double cusp_threshold);
DaniReport dani_crosscheck(const IfsSystem& ifs, const std::vector<std::pair<std::string, Vec>>& panel,
                           const HeightParams& params, const ExcursionSpec& spec,
                           const std::vector<double>& eps_ladder, const std::vector<double>& N_ladder,
                           double cusp_threshold = 0.05, int threads = 1);

// Spearman correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Continued-fraction oracle for d = 1.
std::vector<long long> continued_fraction(double x, int terms);
std::vector<long long> convergent_denominators(const std::vector<long long>& cf);

}  // namespace singlab
