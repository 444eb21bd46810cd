#pragma once

#include <vector>

#include "singlab/ifs.hpp"

namespace singlab {

struct AffineSubspace {
  Mat normals;  // ℓ×d, orthonormal rows
  Vec offset;   // a point on the subspace

  static AffineSubspace make(const Mat& normals, const Vec& offset);
  int ambient_dim() const { return static_cast<int>(offset.size()); }
  int codim() const { return static_cast<int>(normals.rows()); }
  double distance(const Vec& x) const { return (normals * (x - offset)).norm(); }
};

struct MassBracket {
  double lower = 0.0;
  double upper = 0.0;
};

struct SearchBudget {
  int directions = 720;     // Grassmannian grid size
  double resolution = 1.0;  // depth_eps / eps
  int threads = 1;
};

// Cylinders of a complete prefix set with their enclosure data.
struct CylinderCloud {
  int dim = 0;
  std::vector<double> centers;    // n×dim, row-major
  std::vector<double> ratios;
  std::vector<double> masses;
  std::vector<double> rotations;  // n×dim×dim when the IFS rotates, else empty
  Vec half_widths;                // enclosure box half-widths (box mode)
  bool box_mode = true;
  double ball_radius = 0.0;
  std::size_t size() const { return ratios.size(); }
  // Half-width of cylinder j's enclosure projected on unit vector n.
  double projected_half_width(std::size_t j, const Vec& n) const;
  // Radius of a ball containing cylinder j's enclosure.
  double radius(std::size_t j) const;
};

CylinderCloud build_cloud(const IfsSystem& ifs, double depth_eps);

MassBracket line_mass(const IfsSystem& ifs, const AffineSubspace& L, double eps, double depth_eps);
MassBracket line_mass(const CylinderCloud& cloud, const AffineSubspace& L, double eps);

struct SupResult {
  MassBracket bracket;
  Mat best_normals;  // normals of the maximizing subspace
  Vec best_offset;
  int directions = 0;
};

// Best bracket for a fixed normal frame N (ℓ×d) over all offsets.
SupResult sup_over_offsets(const CylinderCloud& cloud, const Mat& normals, double eps);
// Normal frames searched for codimension ℓ.
std::vector<Mat> direction_grid(const IfsSystem& ifs, int ell, int directions);
SupResult sup_line_mass(const IfsSystem& ifs, int ell, double eps, const SearchBudget& budget = {});

struct ScalingFit {
  std::vector<double> eps;
  std::vector<MassBracket> values;
  std::vector<SupResult> details;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;     // max |two-point slope - slope|
  double lower_slope = 0.0;  // same fit on the lower bracket (NaN if a lower bracket is 0)
  double uncertainty = 0.0;  // |slope - lower_slope| (inf if undefined)
};

ScalingFit fit_scaling(const std::vector<double>& eps, const std::vector<MassBracket>& values);
std::vector<double> geometric_ladder(double first, double ratio, int count);

ScalingFit alpha_estimate(const IfsSystem& ifs, int ell, const std::vector<double>& eps_ladder,
                          const SearchBudget& budget = {});
ScalingFit frostman_projection(const IfsSystem& ifs, const Vec& direction, const std::vector<double>& eps_ladder,
                               const SearchBudget& budget = {});

// Covering count for 1-D windows: an interval of length 2Aε is covered by this many of length 2ε.
int doubling_constant(double A);

struct RotationCocycleResult {
  double estimate = 0.0;           // max over n of the per-n values
  std::vector<double> per_n;       // (1/(n log ρ)) mean_θ (log τ(θ,n) + log D)
  // (mean_θ log τ(θ,n) - mean_θ log τ(θ,n-1)) / log ρ; the constant in τ cancels.
  std::vector<double> increments;
  double increment_estimate = 0.0; // last increment
  int D = 0;
  double angle = 0.0;
  double rho = 0.0;
};

RotationCocycleResult rotation_cocycle_bound(const IfsSystem& ifs, int n_max, int theta_grid);

struct DimensionBound {
  double bound = 0.0;
  double varpi = 0.0;
  double beta = 0.0;
};

DimensionBound dimension_bound(double s, int d, const std::vector<double>& alphas);
std::vector<double> small_codim_bound(double s, int d);

}  // namespace singlab
