#pragma once

#include <vector>

#include "singlab/common.hpp"

namespace singlab {

using IndexSet = std::vector<int>;
using IntMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Coordinates over e_I, I ⊂ {0..n-1}, |I| = level, lexicographic order.
struct ExteriorVector {
  int n = 0;
  int level = 0;
  std::vector<double> coords;

  static ExteriorVector zero(int n, int level);
  static ExteriorVector basis(int n, const IndexSet& I);
  double norm() const;
  double at(const IndexSet& I) const;
  double& at(const IndexSet& I);
  ExteriorVector scaled(double c) const;
};

const std::vector<IndexSet>& exterior_basis(int n, int ell);
int index_of(int n, const IndexSet& I);

// v_1 ∧ … ∧ v_ℓ from the columns of V (n×ℓ).
ExteriorVector wedge(const Mat& V);
// ∧^ℓ M: entry (I,J) = det M[I,J].
Mat compound_matrix(const Mat& M, int ell);
ExteriorVector apply_matrix(const Mat& M, const ExteriorVector& v);

// u(x) fixes e_0 and sends e_i to e_i + x_i e_0.
ExteriorVector apply_unipotent(const Vec& x, const ExteriorVector& v);
ExteriorVector apply_diagonal(double t, const ExteriorVector& v);
double diagonal_weight(int n, const IndexSet& I);
Mat unipotent_matrix(const Vec& x);
Mat diagonal_matrix(double t, int d);

struct Lattice {
  Mat basis;  // columns generate the lattice
  static Lattice make(const Mat& basis);
  static Lattice standard(int n) { return Lattice{Mat::Identity(n, n)}; }
  int n() const { return static_cast<int>(basis.rows()); }
  Lattice acted(const Mat& g) const { return Lattice{g * basis}; }
};

struct HeightParams {
  double eps = 0.1;
  double rho_exp = 0.5;
  std::vector<double> alphas;
  double varpi = 0.0;
  std::vector<double> betas;  // β_1..β_d
  double beta = 0.0;
  double gamma = 0.0;
  double gamma0 = 0.0;

  // gamma = NaN selects the upper end ϱβ.
  static HeightParams make(double eps, double rho_exp, const std::vector<double>& alphas, double gamma);
  int d() const { return static_cast<int>(alphas.size()); }
  double beta_at(int ell) const;  // any integer ℓ, from (d-ℓ+1)/ϖ
};

struct PhiResult {
  double value = 0.0;     // 1 / minimal covolume found
  double covolume = 0.0;
  bool certified = false; // global optimum guaranteed
  int radius = 0;         // coefficient radius used
  bool via_dual = false;
  std::vector<std::vector<long long>> coeffs;  // reduced-basis coefficients of the minimizer
};

Mat lll_reduce(const Mat& B, double delta = 0.99);
PhiResult phi_ell(const Lattice& x, int ell, int radius_cap = 64);
// Direct subset search (no duality); used as a cross-check.
PhiResult phi_ell_direct(const Lattice& x, int ell, int radius_cap = 64);

struct HeightValue {
  double f = 0.0;
  std::vector<double> phi;
  bool certified = true;
};

HeightValue margulis_height(const Lattice& x, const HeightParams& p, int radius_cap = 64);
double margulis_formula(const std::vector<double>& phi, const HeightParams& p);

struct IsolationReport {
  double F = 0.0;
  double threshold = 0.0;       // F / Q^{2ϖ}
  bool active = false;          // F > C1
  std::vector<int> counts;      // primitive subgroups in Ψ(x) per level, up to sign
  std::vector<double> level_max;
  bool certified = true;
};

IsolationReport isolation_profile(const Lattice& x, const HeightParams& p, double Q_norm, int radius_cap = 64,
                                  double C1 = 1.0);

double set_norm(const std::vector<Mat>& Q);

// Integer linear algebra for primitivity and submodularity.
long long int_det(const IntMat& M);
std::vector<long long> smith_invariants(const IntMat& M);
bool is_primitive(const IntMat& C);
// Basis of the Z-span of the columns and of the integer kernel.
IntMat span_basis(const IntMat& C);
IntMat integer_kernel(const IntMat& M);
IntMat intersect_lattices(const IntMat& C1, const IntMat& C2);
IntMat sum_lattices(const IntMat& C1, const IntMat& C2);
double covolume(const Mat& basis, const IntMat& C);

}  // namespace singlab
