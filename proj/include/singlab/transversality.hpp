#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "singlab/exterior.hpp"
#include "singlab/ifs.hpp"

namespace singlab {

struct ExpansionParams {
  int d = 1;
  int ell = 1;
  double delta = 0.5;
  double lam = 0.5;
  double gamma = 0.0;
  double kappa = 0.0;  // δλ(d-ℓ+1)/(d+1)
  double p = 0.0;      // (1+δ)/(1-δ)
  double q = 0.0;      // (1+δ)/(2δ), conjugate to p
  double alpha = NAN;  // α_ℓ of the fractal when known; checked against lam

  static ExpansionParams make(int d, int ell, double delta, double lam, double gamma, double alpha = NAN);
};

// n_I for 0 ∈ I: coordinate i-1 holds ±v_{(I∪{i})∖{0}} for i ∉ I.
Vec normal_vector(const ExteriorVector& v, const IndexSet& I);
// {(J∪{0})∖{j} : j ∈ J}, j ascending.
std::vector<IndexSet> jset(const IndexSet& J, int d);
double transversality_defect(const ExteriorVector& v, const IndexSet& J);

struct Hyperplane {
  Vec normal;  // unit
  double offset = 0.0;  // {y : normal·y = offset}
};

struct ContainmentReport {
  int ell = 0;
  double kappa = 0.0;
  double eps = 0.0;
  double wedge_norm = 0.0;
  double C = 0.0;
  double max_ratio = 0.0;  // max distance/ε over samples and vertices
  int accepted = 0;
  int proposals = 0;
  int violations = 0;
};

ContainmentReport containment_check(const std::vector<Hyperplane>& planes, double kappa, double eps, int samples,
                                    std::uint64_t seed);
double containment_constant(double kappa, int ell);
// ℓ random hyperplanes through random offsets whose normals have wedge norm
// close to κ from above (within 10% when ℓ = 2).
std::vector<Hyperplane> random_transverse_planes(int d, int ell, double kappa, Rng& rng);

struct ExpansionReport {
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double lhs_upper = 0.0;  // lhs + 3·stderr
  double rhs = 0.0;        // ‖v‖^{-δλ}(∫τ^{p(γ+κ)}dμ)^{1/p}, exact
  double ratio = 0.0;
  double ratio_upper = 0.0;
  int samples = 0;
  int tau_depth = 0;
};

ExpansionReport expansion_moment_audit(const IfsSystem& ifs, const ExteriorVector& v, const ExpansionParams& params,
                                       int tau_depth, int samples, std::uint64_t seed, int threads = 1);

}  // namespace singlab
