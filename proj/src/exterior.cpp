#include "singlab/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

namespace singlab {

namespace {

struct BasisTable {
  std::vector<IndexSet> sets;
  std::vector<int> by_mask;
};

const BasisTable& table(int n, int ell) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, BasisTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, ell});
  if (it != cache.end()) return it->second;
  BasisTable t;
  t.by_mask.assign(1u << n, -1);
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == ell) {
      int mask = 0;
      for (int i : cur) mask |= 1 << i;
      t.by_mask[mask] = static_cast<int>(t.sets.size());
      t.sets.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return cache.emplace(std::make_pair(n, ell), std::move(t)).first->second;
}

int mask_of(const IndexSet& I) {
  int m = 0;
  for (int i : I) m |= 1 << i;
  return m;
}

}  // namespace

const std::vector<IndexSet>& exterior_basis(int n, int ell) {
  if (n < 1 || n > 16 || ell < 1 || ell > n) fail(ErrorCode::InvalidInput, "exterior level out of range");
  return table(n, ell).sets;
}

int index_of(int n, const IndexSet& I) {
  const int ell = static_cast<int>(I.size());
  for (std::size_t k = 0; k < I.size(); ++k)
    if (I[k] < 0 || I[k] >= n || (k > 0 && I[k] <= I[k - 1]))
      fail(ErrorCode::InvalidInput, "index set must be strictly increasing within range");
  return table(n, ell).by_mask[mask_of(I)];
}

ExteriorVector ExteriorVector::zero(int n, int level) {
  return ExteriorVector{n, level, std::vector<double>(exterior_basis(n, level).size(), 0.0)};
}

ExteriorVector ExteriorVector::basis(int n, const IndexSet& I) {
  ExteriorVector v = zero(n, static_cast<int>(I.size()));
  v.coords[index_of(n, I)] = 1.0;
  return v;
}

double ExteriorVector::norm() const {
  double s = 0.0;
  for (double c : coords) s += c * c;
  return std::sqrt(s);
}

double ExteriorVector::at(const IndexSet& I) const { return coords[index_of(n, I)]; }
double& ExteriorVector::at(const IndexSet& I) { return coords[index_of(n, I)]; }

ExteriorVector ExteriorVector::scaled(double c) const {
  ExteriorVector v = *this;
  for (auto& x : v.coords) x *= c;
  return v;
}

namespace {

Mat submatrix(const Mat& M, const IndexSet& rows, const IndexSet& cols) {
  Mat s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = M(rows[i], cols[j]);
  return s;
}

}  // namespace

ExteriorVector wedge(const Mat& V) {
  const int n = static_cast<int>(V.rows()), ell = static_cast<int>(V.cols());
  ExteriorVector out = ExteriorVector::zero(n, ell);
  IndexSet all(ell);
  std::iota(all.begin(), all.end(), 0);
  const auto& sets = exterior_basis(n, ell);
  for (std::size_t k = 0; k < sets.size(); ++k) out.coords[k] = submatrix(V, sets[k], all).determinant();
  return out;
}

Mat compound_matrix(const Mat& M, int ell) {
  const int n = static_cast<int>(M.rows());
  const auto& sets = exterior_basis(n, ell);
  Mat C(sets.size(), sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j) C(i, j) = submatrix(M, sets[i], sets[j]).determinant();
  return C;
}

ExteriorVector apply_matrix(const Mat& M, const ExteriorVector& v) {
  if (M.rows() != v.n || M.cols() != v.n) fail(ErrorCode::InvalidInput, "matrix/vector dimension mismatch");
  const Mat C = compound_matrix(M, v.level);
  const Vec out = C * Eigen::Map<const Vec>(v.coords.data(), v.coords.size());
  return ExteriorVector{v.n, v.level, std::vector<double>(out.data(), out.data() + out.size())};
}

ExteriorVector apply_unipotent(const Vec& x, const ExteriorVector& v) {
  const int n = v.n;
  if (x.size() != n - 1) fail(ErrorCode::InvalidInput, "x must have d = n-1 coordinates");
  if (v.level < 1 || v.level > n) fail(ErrorCode::InvalidInput, "level out of range");
  const auto& sets = exterior_basis(n, v.level);
  const auto& tab = table(n, v.level);
  ExteriorVector out = v;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const IndexSet& I = sets[k];
    if (I[0] != 0) continue;
    const int base = mask_of(I) & ~1;
    for (int i = 1; i < n; ++i) {
      if (base >> i & 1) continue;
      const int jm = base | (1 << i);
      // position of i inside J = (I \ {0}) ∪ {i}
      const int pos = __builtin_popcount(jm & ((1 << i) - 1));
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      out.coords[k] += sign * x[i - 1] * v.coords[tab.by_mask[jm]];
    }
  }
  return out;
}

double diagonal_weight(int n, const IndexSet& I) {
  const int d = n - 1;
  double w = 0.0;
  for (int i : I) w += (i == 0) ? -static_cast<double>(d) / (d + 1) : 1.0 / (d + 1);
  return w;
}

ExteriorVector apply_diagonal(double t, const ExteriorVector& v) {
  if (!(t > 0.0)) fail(ErrorCode::InvalidInput, "t must be positive");
  const auto& sets = exterior_basis(v.n, v.level);
  ExteriorVector out = v;
  for (std::size_t k = 0; k < sets.size(); ++k) out.coords[k] *= std::pow(t, diagonal_weight(v.n, sets[k]));
  return out;
}

Mat unipotent_matrix(const Vec& x) {
  const int n = static_cast<int>(x.size()) + 1;
  Mat u = Mat::Identity(n, n);
  for (int i = 1; i < n; ++i) u(0, i) = x[i - 1];
  return u;
}

Mat diagonal_matrix(double t, int d) {
  if (!(t > 0.0)) fail(ErrorCode::InvalidInput, "t must be positive");
  Mat g = Mat::Zero(d + 1, d + 1);
  g(0, 0) = std::pow(t, -static_cast<double>(d) / (d + 1));
  for (int i = 1; i <= d; ++i) g(i, i) = std::pow(t, 1.0 / (d + 1));
  return g;
}

Lattice Lattice::make(const Mat& basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 2) fail(ErrorCode::InvalidInput, "lattice basis must be square");
  if (std::abs(std::abs(basis.determinant()) - 1.0) > 1e-9)
    fail(ErrorCode::InvalidInput, "lattice basis must be unimodular");
  return Lattice{basis};
}

HeightParams HeightParams::make(double eps, double rho_exp, const std::vector<double>& alphas, double gamma) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::InvalidInput, "eps must lie in (0,1)");
  if (!(rho_exp > 0.0 && rho_exp < 1.0)) fail(ErrorCode::InvalidInput, "rho_exp must lie in (0,1)");
  if (alphas.empty()) fail(ErrorCode::InvalidInput, "alphas must be non-empty");
  HeightParams p;
  p.eps = eps;
  p.rho_exp = rho_exp;
  p.alphas = alphas;
  const int d = static_cast<int>(alphas.size());
  p.varpi = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= d; ++l) p.varpi = std::min(p.varpi, alphas[l - 1] * (d - l + 1));
  if (!(p.varpi > 0.0)) fail(ErrorCode::InvalidInput, "alphas must be positive");
  for (int l = 1; l <= d; ++l) p.betas.push_back((d - l + 1) / p.varpi);
  p.beta = p.varpi / (d + 1);
  p.gamma0 = rho_exp * p.beta - (1.0 - rho_exp) / (1.0 + rho_exp);
  p.gamma = std::isnan(gamma) ? rho_exp * p.beta : gamma;
  const double hi = rho_exp * p.beta;
  if (p.gamma < p.gamma0 - 1e-12 || p.gamma > hi + 1e-12)
    fail(ErrorCode::InvalidInput, "gamma must lie in [gamma0, rho*beta]");
  return p;
}

double HeightParams::beta_at(int ell) const { return (d() - ell + 1) / varpi; }

double set_norm(const std::vector<Mat>& Q) {
  double best = 0.0;
  for (const auto& g : Q) {
    if (g.rows() != g.cols()) fail(ErrorCode::InvalidInput, "matrices must be square");
    Eigen::JacobiSVD<Mat> svd(g);
    const Vec s = svd.singularValues();
    const double smin = s[s.size() - 1];
    if (!(smin > 1e-300) || smin < 1e-14 * s[0]) fail(ErrorCode::InvalidInput, "singular matrix in Q");
    best = std::max(best, std::pow(std::max(s[0], 1.0 / smin), static_cast<double>(g.rows())));
  }
  return best;
}

// ------------------------------------------------------ integer linear algebra

long long int_det(const IntMat& M) {
  // Bareiss fraction-free elimination.
  const Eigen::Index n = M.rows();
  if (n != M.cols()) fail(ErrorCode::InvalidInput, "determinant of non-square matrix");
  if (n == 0) return 1;
  IntMat a = M;
  long long sign = 1, prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      a.row(k).swap(a.row(r));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a(i, j) = static_cast<long long>((static_cast<__int128>(a(i, j)) * a(k, k) -
                                          static_cast<__int128>(a(i, k)) * a(k, j)) / prev);
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

void for_each_subset(int n, int k, const std::function<void(const IndexSet&)>& fn) {
  IndexSet cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      fn(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

long long minor_gcd(const IntMat& M, int k) {
  long long g = 0;
  IndexSet cols_all;
  for_each_subset(static_cast<int>(M.rows()), k, [&](const IndexSet& rows) {
    for_each_subset(static_cast<int>(M.cols()), k, [&](const IndexSet& cols) {
      IntMat s(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s(i, j) = M(rows[i], cols[j]);
      g = std::gcd(g, std::llabs(int_det(s)));
    });
  });
  return g;
}

}  // namespace

std::vector<long long> smith_invariants(const IntMat& M) {
  // d_k = gcd of k×k minors; invariant factors s_k = d_k / d_{k-1}.
  std::vector<long long> out;
  long long prev = 1;
  const int r = static_cast<int>(std::min(M.rows(), M.cols()));
  for (int k = 1; k <= r; ++k) {
    const long long dk = minor_gcd(M, k);
    if (dk == 0) break;
    out.push_back(dk / prev);
    prev = dk;
  }
  return out;
}

bool is_primitive(const IntMat& C) {
  const int ell = static_cast<int>(C.cols());
  if (ell == 0) return true;
  return minor_gcd(C, ell) == 1;
}

namespace {

// Column-style Hermite reduction: returns (H, U) with C·U = H, U unimodular,
// nonzero columns of H first.
std::pair<IntMat, IntMat> column_reduce(const IntMat& C) {
  IntMat A = C;
  const Eigen::Index k = A.cols();
  IntMat U = IntMat::Identity(k, k);
  Eigen::Index piv = 0;
  for (Eigen::Index r = 0; r < A.rows() && piv < k; ++r) {
    for (Eigen::Index j = piv + 1; j < k; ++j) {
      // Euclid on columns piv and j restricted to row r.
      while (A(r, j) != 0) {
        const long long q = A(r, piv) / A(r, j);
        A.col(piv) -= q * A.col(j);
        U.col(piv) -= q * U.col(j);
        A.col(piv).swap(A.col(j));
        U.col(piv).swap(U.col(j));
      }
    }
    if (A(r, piv) != 0) {
      if (A(r, piv) < 0) {
        A.col(piv) = -A.col(piv);
        U.col(piv) = -U.col(piv);
      }
      ++piv;
    }
  }
  return {A, U};
}

Eigen::Index nonzero_cols(const IntMat& H) {
  Eigen::Index c = 0;
  while (c < H.cols() && H.col(c).cwiseAbs().maxCoeff() != 0) ++c;
  return c;
}

}  // namespace

IntMat span_basis(const IntMat& C) {
  if (C.cols() == 0) return IntMat(C.rows(), 0);
  auto [H, U] = column_reduce(C);
  return H.leftCols(nonzero_cols(H));
}

IntMat integer_kernel(const IntMat& M) {
  if (M.cols() == 0) return IntMat(0, 0);
  auto [H, U] = column_reduce(M);
  const Eigen::Index r = nonzero_cols(H);
  return U.rightCols(M.cols() - r);
}

IntMat sum_lattices(const IntMat& C1, const IntMat& C2) {
  IntMat C(C1.rows(), C1.cols() + C2.cols());
  C << C1, C2;
  return span_basis(C);
}

IntMat intersect_lattices(const IntMat& C1, const IntMat& C2) {
  IntMat M(C1.rows(), C1.cols() + C2.cols());
  M << C1, -C2;
  const IntMat K = integer_kernel(M);
  if (K.cols() == 0) return IntMat(C1.rows(), 0);
  return span_basis(C1 * K.topRows(C1.cols()));
}

double covolume(const Mat& basis, const IntMat& C) {
  if (C.cols() == 0) return 1.0;
  const Mat V = basis * C.cast<double>();
  return std::sqrt(std::max(0.0, (V.transpose() * V).determinant()));
}

}  // namespace singlab
