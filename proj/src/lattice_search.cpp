#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "singlab/exterior.hpp"

namespace singlab {

namespace {

constexpr std::size_t kEnumLimit = 4'000'000;

void gram_schmidt(const Mat& B, Mat& Bs, Mat& mu, Vec& norms2) {
  const Eigen::Index n = B.cols();
  Bs = B;
  mu = Mat::Zero(n, n);
  norms2 = Vec::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      mu(i, j) = B.col(i).dot(Bs.col(j)) / norms2[j];
      Bs.col(i) -= mu(i, j) * Bs.col(j);
    }
    norms2[i] = Bs.col(i).squaredNorm();
  }
}

struct ShortVec {
  double norm;
  Vec v;
  std::vector<long long> c;
};

// Fincke–Pohst: every c with ‖Bc‖ ≤ r, |c_i| ≤ cap, c ≠ 0, first nonzero
// coefficient positive. Returns false if the cap or the size limit cut anything.
bool enumerate_short(const Mat& B, double r, int cap, std::vector<ShortVec>& out) {
  const int n = static_cast<int>(B.cols());
  Mat Bs, mu;
  Vec nb;
  gram_schmidt(B, Bs, mu, nb);
  const double r2 = r * r * (1.0 + 1e-12) + 1e-300;
  std::vector<long long> c(n, 0);
  std::vector<double> partial(n + 1, 0.0);
  bool complete = true;
  std::function<void(int)> rec = [&](int i) {
    if (!complete && out.size() >= kEnumLimit) return;
    double center = 0.0;
    for (int j = i + 1; j < n; ++j) center -= mu(j, i) * static_cast<double>(c[j]);
    const double rem = r2 - partial[i + 1];
    if (rem < 0) return;
    const double half = std::sqrt(rem / nb[i]);
    long long lo = static_cast<long long>(std::ceil(center - half));
    long long hi = static_cast<long long>(std::floor(center + half));
    if (lo < -cap) { lo = -cap; complete = false; }
    if (hi > cap) { hi = cap; complete = false; }
    for (long long k = lo; k <= hi; ++k) {
      const double t = static_cast<double>(k) - center;
      partial[i] = partial[i + 1] + t * t * nb[i];
      if (partial[i] > r2) continue;
      c[i] = k;
      if (i > 0) {
        rec(i - 1);
      } else {
        int first = 0;
        while (first < n && c[first] == 0) ++first;
        if (first == n || c[first] < 0) continue;
        if (out.size() >= kEnumLimit) {
          complete = false;
          return;
        }
        Vec v = Vec::Zero(B.rows());
        for (int j = 0; j < n; ++j) v += static_cast<double>(c[j]) * B.col(j);
        out.push_back({v.norm(), v, c});
      }
    }
    c[i] = 0;
  };
  rec(n - 1);
  std::sort(out.begin(), out.end(), [](const ShortVec& a, const ShortVec& b) { return a.norm < b.norm; });
  return complete;
}

long long vec_gcd(const std::vector<long long>& c) {
  long long g = 0;
  for (long long x : c) g = std::gcd(g, std::llabs(x));
  return g;
}

int max_abs(const std::vector<long long>& c) {
  long long m = 0;
  for (long long x : c) m = std::max(m, std::llabs(x));
  return static_cast<int>(std::min<long long>(m, std::numeric_limits<int>::max()));
}

double minkowski_constant(int ell) {
  // γ_ℓ^{ℓ/2} for the Hermite constants γ_1..γ_4.
  switch (ell) {
    case 1: return 1.0;
    case 2: return 2.0 / std::sqrt(3.0);
    case 3: return std::sqrt(2.0);
    case 4: return 2.0;
    default: return std::pow(1.0 + ell / 4.0, ell / 2.0);
  }
}

IntMat coeff_matrix(const std::vector<const ShortVec*>& vs) {
  const int n = static_cast<int>(vs[0]->c.size());
  IntMat C(n, vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (int i = 0; i < n; ++i) C(i, j) = vs[j]->c[i];
  return C;
}

// gcd of the maximal minors: the index of the span inside its primitive hull, 0 when dependent.
long long maximal_minor_gcd(const IntMat& C) {
  const int ell = static_cast<int>(C.cols());
  long long g = 0;
  IntMat s(ell, ell);
  for (const auto& I : exterior_basis(static_cast<int>(C.rows()), ell)) {
    for (int a = 0; a < ell; ++a)
      for (int b = 0; b < ell; ++b) s(a, b) = C(I[a], b);
    g = std::gcd(g, std::llabs(int_det(s)));
    if (g == 1) break;
  }
  return g;
}

double gram_covolume(const std::vector<const ShortVec*>& vs) {
  Mat V(vs[0]->v.size(), vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j) V.col(j) = vs[j]->v;
  const double g = (V.transpose() * V).determinant();
  double scale = 1.0;
  for (const auto* s : vs) scale *= s->norm * s->norm;
  if (g <= 1e-20 * scale) return 0.0;
  return std::sqrt(g);
}

// Visit every independent ℓ-tuple of candidates (sorted by norm) whose entries have
// norm ≤ bound(); bound may shrink during the walk.
void for_each_tuple(const std::vector<ShortVec>& cand, int ell, const std::function<double()>& bound,
                    const std::function<void(const std::vector<const ShortVec*>&)>& fn) {
  std::vector<const ShortVec*> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == ell) {
      fn(cur);
      return;
    }
    for (std::size_t i = start; i < cand.size(); ++i) {
      if (cand[i].norm > bound()) break;
      cur.push_back(&cand[i]);
      if (cur.size() < 2 || gram_covolume(cur) > 0.0) rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

PhiResult shortest(const Mat& Bred, int cap) {
  PhiResult r;
  double bound = Bred.col(0).norm();
  for (Eigen::Index j = 1; j < Bred.cols(); ++j) bound = std::min(bound, Bred.col(j).norm());
  std::vector<ShortVec> vs;
  r.certified = enumerate_short(Bred, bound, cap, vs);
  if (vs.empty()) fail(ErrorCode::Precondition, "enumeration found no vector within the coefficient cap");
  r.covolume = vs[0].norm;
  r.value = 1.0 / r.covolume;
  r.radius = max_abs(vs[0].c);
  r.coeffs = {vs[0].c};
  return r;
}

PhiResult subset_search(const Mat& Bred, int ell, int cap) {
  const int n = static_cast<int>(Bred.cols());
  const PhiResult sv = shortest(Bred, cap);
  const double lambda1 = sv.covolume;
  // Start from the first ℓ reduced basis vectors, which span a primitive subgroup.
  Mat first = Bred.leftCols(ell);
  double best = std::sqrt((first.transpose() * first).determinant());
  std::vector<std::vector<long long>> best_coeffs;
  for (int j = 0; j < ell; ++j) {
    std::vector<long long> e(n, 0);
    e[j] = 1;
    best_coeffs.push_back(e);
  }
  const double gam = minkowski_constant(ell);
  auto bound = [&] { return gam * best / std::pow(lambda1, ell - 1) * (1.0 + 1e-9); };
  std::vector<ShortVec> cand;
  bool complete = enumerate_short(Bred, bound(), cap, cand) && sv.certified;
  for_each_tuple(cand, ell, bound, [&](const std::vector<const ShortVec*>& t) {
    const double cov = gram_covolume(t);
    if (cov <= 0.0) return;
    // idx = 0: the integer coefficients are dependent and cov is round-off
    const long long idx = maximal_minor_gcd(coeff_matrix(t));
    if (idx == 0) return;
    const double prim = cov / static_cast<double>(idx);
    if (prim < best * (1.0 - 1e-12)) {
      best = prim;
      best_coeffs.clear();
      for (const auto* s : t) best_coeffs.push_back(s->c);
    }
  });
  PhiResult r;
  r.covolume = best;
  r.value = 1.0 / best;
  r.certified = complete;
  r.coeffs = best_coeffs;
  int rad = 0;
  for (const auto& c : best_coeffs) rad = std::max(rad, max_abs(c));
  r.radius = rad;
  return r;
}

void check_ell(const Lattice& x, int ell) {
  if (x.basis.rows() != x.basis.cols() || x.n() < 2) fail(ErrorCode::InvalidInput, "lattice basis must be square");
  if (ell < 1 || ell > x.n() - 1) fail(ErrorCode::InvalidInput, "ell must lie in 1..d");
}

Mat dual_basis(const Mat& B) { return B.inverse().transpose(); }

}  // namespace

Mat lll_reduce(const Mat& Bin, double delta) {
  Mat B = Bin;
  const Eigen::Index n = B.cols();
  if (n < 2) return B;
  Mat Bs, mu;
  Vec nb;
  Eigen::Index k = 1;
  for (int iter = 0; k < n && iter < 200000; ++iter) {
    gram_schmidt(B, Bs, mu, nb);
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        B.col(k) -= q * B.col(j);
        for (Eigen::Index i = 0; i < j; ++i) mu(k, i) -= q * mu(j, i);
        mu(k, j) -= q;
      }
    }
    gram_schmidt(B, Bs, mu, nb);
    if (nb[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * nb[k - 1]) {
      ++k;
    } else {
      B.col(k).swap(B.col(k - 1));
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return B;
}

PhiResult phi_ell_direct(const Lattice& x, int ell, int radius_cap) {
  check_ell(x, ell);
  if (radius_cap < 1) fail(ErrorCode::InvalidInput, "radius must be positive");
  const Mat Bred = lll_reduce(x.basis);
  return ell == 1 ? shortest(Bred, radius_cap) : subset_search(Bred, ell, radius_cap);
}

PhiResult phi_ell(const Lattice& x, int ell, int radius_cap) {
  check_ell(x, ell);
  if (radius_cap < 1) fail(ErrorCode::InvalidInput, "radius must be positive");
  const int n = x.n();
  if (ell == n - 1 && n >= 3) {
    // Primitive corank-1 subgroups of x correspond to primitive vectors of the dual
    // with equal covolume.
    PhiResult r = shortest(lll_reduce(dual_basis(x.basis)), radius_cap);
    r.via_dual = true;
    return r;
  }
  return phi_ell_direct(x, ell, radius_cap);
}

double margulis_formula(const std::vector<double>& phi, const HeightParams& p) {
  if (static_cast<int>(phi.size()) != p.d()) fail(ErrorCode::InvalidInput, "need one phi value per level");
  double f = 2.0;
  for (int l = 1; l <= p.d(); ++l) f += std::pow(p.eps, l) * std::pow(phi[l - 1], p.rho_exp / p.betas[l - 1]);
  return f;
}

HeightValue margulis_height(const Lattice& x, const HeightParams& p, int radius_cap) {
  if (x.n() != p.d() + 1) fail(ErrorCode::InvalidInput, "lattice dimension does not match params");
  HeightValue h;
  for (int l = 1; l <= p.d(); ++l) {
    const PhiResult r = phi_ell(x, l, radius_cap);
    h.phi.push_back(r.value);
    h.certified = h.certified && r.certified;
  }
  h.f = margulis_formula(h.phi, p);
  return h;
}

namespace {

// Primitive rank-ℓ subgroups with covolume ≤ thr, up to sign.
int count_primitive(const Mat& B, int ell, double thr, int cap, bool& certified) {
  const int n = static_cast<int>(B.cols());
  if (ell == n - 1 && n >= 3) return count_primitive(dual_basis(B), 1, thr, cap, certified);
  const Mat Bred = lll_reduce(B);
  if (ell == 1) {
    std::vector<ShortVec> vs;
    certified = enumerate_short(Bred, thr, cap, vs) && certified;
    int count = 0;
    for (const auto& s : vs)
      if (vec_gcd(s.c) == 1) ++count;
    return count;
  }
  const PhiResult sv = shortest(Bred, cap);
  certified = certified && sv.certified;
  const double bound = minkowski_constant(ell) * thr / std::pow(sv.covolume, ell - 1) * (1.0 + 1e-9);
  std::vector<ShortVec> cand;
  certified = enumerate_short(Bred, bound, cap, cand) && certified;
  std::set<std::vector<long long>> seen;
  const auto& sets = exterior_basis(n, ell);
  for_each_tuple(cand, ell, [&] { return bound; }, [&](const std::vector<const ShortVec*>& t) {
    const double cov = gram_covolume(t);
    if (cov <= 0.0) return;
    const IntMat C = coeff_matrix(t);
    std::vector<long long> pl;
    long long g = 0;
    for (const auto& I : sets) {
      IntMat s(ell, ell);
      for (int a = 0; a < ell; ++a)
        for (int b = 0; b < ell; ++b) s(a, b) = C(I[a], b);
      pl.push_back(int_det(s));
      g = std::gcd(g, std::llabs(pl.back()));
    }
    if (g == 0 || cov / static_cast<double>(g) > thr * (1.0 + 1e-9)) return;
    std::size_t f = 0;
    while (f < pl.size() && pl[f] == 0) ++f;
    const long long sgn = (f < pl.size() && pl[f] < 0) ? -1 : 1;
    for (auto& v : pl) v = sgn * v / g;
    seen.insert(pl);
  });
  return static_cast<int>(seen.size());
}

}  // namespace

IsolationReport isolation_profile(const Lattice& x, const HeightParams& p, double Q_norm, int radius_cap, double C1) {
  if (!(Q_norm > 0.0)) fail(ErrorCode::InvalidInput, "Q_norm must be positive");
  if (x.n() != p.d() + 1) fail(ErrorCode::InvalidInput, "lattice dimension does not match params");
  IsolationReport rep;
  const int d = p.d();
  for (int l = 1; l <= d; ++l) {
    const PhiResult r = phi_ell(x, l, radius_cap);
    rep.certified = rep.certified && r.certified;
    const double term = std::pow(p.eps, p.varpi * l) * std::pow(r.value, 1.0 / p.betas[l - 1]);
    rep.level_max.push_back(term);
    rep.F = std::max(rep.F, term);
  }
  rep.threshold = rep.F / std::pow(Q_norm, 2.0 * p.varpi);
  rep.active = rep.F > C1;
  for (int l = 1; l <= d; ++l) {
    // ε^{ϖℓ}‖v‖^{-1/β_ℓ} ≥ threshold  ⇔  ‖v‖ ≤ (ε^{ϖℓ}/threshold)^{β_ℓ}
    const double thr = std::pow(std::pow(p.eps, p.varpi * l) / rep.threshold, p.betas[l - 1]);
    rep.counts.push_back(count_primitive(x.basis, l, thr, radius_cap, rep.certified));
  }
  return rep;
}

}  // namespace singlab
