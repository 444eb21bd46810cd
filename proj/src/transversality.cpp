#include "singlab/transversality.hpp"

#include <algorithm>
#include <cmath>

namespace singlab {

ExpansionParams ExpansionParams::make(int d, int ell, double delta, double lam, double gamma, double alpha) {
  if (d < 1 || ell < 1 || ell > d) fail(ErrorCode::InvalidInput, "level must lie in 1..d");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidInput, "delta must lie in (0,1)");
  if (!(lam > 0.0)) fail(ErrorCode::InvalidInput, "lam must be positive");
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidInput, "gamma must be finite");
  if (!std::isnan(alpha) && lam > alpha) fail(ErrorCode::Precondition, "lam exceeds alpha_ell of the fractal");
  ExpansionParams p;
  p.d = d;
  p.ell = ell;
  p.delta = delta;
  p.lam = lam;
  p.gamma = gamma;
  p.alpha = alpha;
  p.kappa = delta * lam * (d - ell + 1) / (d + 1);
  p.p = (1.0 + delta) / (1.0 - delta);
  p.q = (1.0 + delta) / (2.0 * delta);
  return p;
}

Vec normal_vector(const ExteriorVector& v, const IndexSet& I) {
  if (static_cast<int>(I.size()) != v.level) fail(ErrorCode::InvalidInput, "index set size must equal the level");
  if (I.empty() || I[0] != 0) fail(ErrorCode::InvalidInput, "index set must contain 0");
  index_of(v.n, I);  // validates ordering
  const int d = v.n - 1;
  Vec n = Vec::Zero(d);
  for (int i = 1; i <= d; ++i) {
    if (std::find(I.begin(), I.end(), i) != I.end()) continue;
    IndexSet J(I.begin() + 1, I.end());
    J.insert(std::upper_bound(J.begin(), J.end(), i), i);
    const auto pos = std::find(J.begin(), J.end(), i) - J.begin();
    n[i - 1] = (pos % 2 == 0 ? 1.0 : -1.0) * v.at(J);
  }
  return n;
}

std::vector<IndexSet> jset(const IndexSet& J, int d) {
  if (J.empty()) fail(ErrorCode::InvalidInput, "J must be non-empty");
  for (std::size_t k = 0; k < J.size(); ++k) {
    if (J[k] == 0) fail(ErrorCode::InvalidInput, "J must not contain 0");
    if (J[k] < 1 || J[k] > d || (k > 0 && J[k] <= J[k - 1]))
      fail(ErrorCode::InvalidInput, "J must be strictly increasing within 1..d");
  }
  std::vector<IndexSet> out;
  for (int j : J) {
    IndexSet I{0};
    for (int i : J)
      if (i != j) I.push_back(i);
    out.push_back(I);
  }
  return out;
}

double transversality_defect(const ExteriorVector& v, const IndexSet& J) {
  const int d = v.n - 1;
  if (static_cast<int>(J.size()) != v.level || v.level > d)
    fail(ErrorCode::InvalidInput, "J must have size equal to the level, at most d");
  const auto sets = jset(J, d);
  Mat N(d, sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) N.col(k) = normal_vector(v, sets[k]);
  const double w = std::sqrt(std::max(0.0, (N.transpose() * N).determinant()));
  return w - std::pow(std::abs(v.at(J)), static_cast<double>(J.size()));
}

double containment_constant(double kappa, int ell) {
  // K = √ℓ bounds the operator norm of a matrix with unit rows.
  return std::pow(kappa, -1.0 - 1.0 / ell) * std::pow(std::sqrt(static_cast<double>(ell)), ell);
}

ContainmentReport containment_check(const std::vector<Hyperplane>& planes, double kappa, double eps, int samples,
                                    std::uint64_t seed) {
  const int ell = static_cast<int>(planes.size());
  if (ell == 0) fail(ErrorCode::InvalidInput, "need at least one hyperplane");
  const int d = static_cast<int>(planes[0].normal.size());
  if (ell < 1 || ell > d - 1) fail(ErrorCode::Precondition, "number of hyperplanes must lie in 1..d-1");
  if (!(kappa > 0.0) || !(eps > 0.0) || samples < 0) fail(ErrorCode::InvalidInput, "kappa, eps must be positive");
  Mat N(ell, d);
  Vec c(ell);
  for (int k = 0; k < ell; ++k) {
    if (planes[k].normal.size() != d) fail(ErrorCode::InvalidInput, "hyperplane dimensions differ");
    if (std::abs(planes[k].normal.norm() - 1.0) > 1e-9) fail(ErrorCode::InvalidInput, "normals must be unit vectors");
    N.row(k) = planes[k].normal.transpose();
    c[k] = planes[k].offset;
  }
  ContainmentReport rep;
  rep.ell = ell;
  rep.kappa = kappa;
  rep.eps = eps;
  rep.wedge_norm = std::sqrt(std::max(0.0, (N * N.transpose()).determinant()));
  // Relative slack absorbs rounding when the planes sit exactly at the bound.
  if (rep.wedge_norm < kappa * (1.0 - 1e-12)) fail(ErrorCode::Precondition, "wedge of normals is below kappa");
  rep.C = containment_constant(kappa, ell);

  const auto cod = N.completeOrthogonalDecomposition();
  const Vec y0 = cod.solve(c);
  if ((N * y0 - c).norm() > 1e-9 * (1.0 + c.norm())) fail(ErrorCode::InconsistentPrecondition, "empty intersection");

  // Orthonormal basis Q (ℓ×d) of the normal space; tangent basis T.
  Eigen::HouseholderQR<Mat> qr(N.transpose());
  const Mat full = qr.householderQ() * Mat::Identity(d, d);
  const Mat Q = full.leftCols(ell).transpose();
  const Mat T = full.rightCols(d - ell);
  const Mat M = N * Q.transpose();  // s = M z
  const Mat Minv = M.inverse();

  auto distance = [&](const Vec& y) { return cod.solve(N * y - c).norm(); };
  auto record = [&](const Vec& y) {
    const double r = distance(y) / eps;
    rep.max_ratio = std::max(rep.max_ratio, r);
    if (r > rep.C * (1.0 + 1e-9)) ++rep.violations;
  };

  // Vertices of the parallelepiped {|s_k| ≤ ε}.
  Vec half = Vec::Zero(ell);
  for (int m = 0; m < (1 << ell); ++m) {
    Vec s(ell);
    for (int k = 0; k < ell; ++k) s[k] = (m >> k & 1) ? eps : -eps;
    const Vec z = Minv * s;
    half = half.cwiseMax(z.cwiseAbs());
    record(y0 + Q.transpose() * z);
  }
  half *= 1.25;

  Rng rng(seed);
  const long long max_proposals = 1000LL * std::max(samples, 1) + 100000;
  while (rep.accepted < samples && rep.proposals < max_proposals) {
    ++rep.proposals;
    Vec z(ell);
    for (int k = 0; k < ell; ++k) z[k] = rng.uniform(-half[k], half[k]);
    const Vec s = M * z;
    if (s.cwiseAbs().maxCoeff() >= eps) continue;
    Vec y = y0 + Q.transpose() * z;
    for (int k = 0; k < d - ell; ++k) y += rng.uniform(-1.0, 1.0) * T.col(k);
    ++rep.accepted;
    record(y);
  }
  return rep;
}

std::vector<Hyperplane> random_transverse_planes(int d, int ell, double kappa, Rng& rng) {
  if (ell < 1 || ell > d - 1) fail(ErrorCode::Precondition, "number of hyperplanes must lie in 1..d-1");
  if (!(kappa > 0.0 && kappa <= 1.0)) fail(ErrorCode::InvalidInput, "kappa must lie in (0,1]");
  auto random_unit = [&] {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    return Vec(v / v.norm());
  };
  std::vector<Hyperplane> out;
  if (ell == 1) {
    out.push_back({random_unit(), rng.uniform(-1.0, 1.0)});
    return out;
  }
  // Random orthonormal frame e_1..e_ell; n_k leans on span(e_1..e_{k-1}) so that its
  // distance to that span is s, and the wedge norm is s^(ell-1).
  Mat E(d, ell);
  for (int k = 0; k < ell; ++k) {
    Vec v = random_unit();
    for (int j = 0; j < k; ++j) v -= v.dot(E.col(j)) * E.col(j);
    E.col(k) = v.normalized();
  }
  const double target = rng.uniform(kappa, std::min(1.0, 1.1 * kappa));
  const double s = std::pow(target, 1.0 / (ell - 1));
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  out.push_back({Vec(E.col(0)), rng.uniform(-1.0, 1.0)});
  for (int k = 1; k < ell; ++k) {
    Vec u = Vec::Zero(d);
    for (int j = 0; j < k; ++j) u += rng.normal() * E.col(j);
    out.push_back({Vec(c * u.normalized() + s * E.col(k)), rng.uniform(-1.0, 1.0)});
  }
  return out;
}

ExpansionReport expansion_moment_audit(const IfsSystem& ifs, const ExteriorVector& v, const ExpansionParams& params,
                                       int tau_depth, int samples, std::uint64_t seed, int threads) {
  const int d = ifs.dim();
  if (v.n != d + 1) fail(ErrorCode::InvalidInput, "exterior vector must live over R^{d+1}");
  if (v.level != params.ell || params.d != d) fail(ErrorCode::InvalidInput, "params do not match v and the IFS");
  if (tau_depth < 1 || samples < 2) fail(ErrorCode::InvalidInput, "tau_depth >= 1 and samples >= 2 required");
  const double vn = v.norm();
  if (!(vn > 0.0)) fail(ErrorCode::InvalidInput, "v must be nonzero");
  const double dl = params.delta * params.lam;

  ExpansionReport rep;
  rep.samples = samples;
  rep.tau_depth = tau_depth;

  double moment = 0.0;
  const double s = ifs.sim_dim();
  for (const auto& m : ifs.maps()) moment += std::pow(m.ratio, s + params.p * (params.gamma + params.kappa));
  rep.rhs = std::pow(vn, -dl) * std::pow(moment, tau_depth / params.p);

  // Point depth: enough symbols to pin x to ~1e-13 of diam K.
  const int depth =
      tau_depth + static_cast<int>(std::ceil(std::log(1e-13) / std::log(ifs.max_ratio())));
  constexpr int kShards = 64;
  // Per-shard count, mean and centered sum of squares, merged in shard order.
  std::vector<double> cnt(kShards, 0.0), mean(kShards, 0.0), m2(kShards, 0.0);
  parallel_for(kShards, threads, [&](int shard) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(shard));
    const int lo = static_cast<int>(static_cast<long long>(samples) * shard / kShards);
    const int hi = static_cast<int>(static_cast<long long>(samples) * (shard + 1) / kShards);
    for (int k = lo; k < hi; ++k) {
      const Word w = random_word(ifs, rng, depth);
      const double tau = rho_cocycle(ifs, w, tau_depth);
      const Vec x = code_point(ifs, w);
      const double nrm = apply_diagonal(tau, apply_unipotent(x, v)).norm();
      const double val = std::pow(tau, params.gamma) * std::pow(nrm, -dl);
      cnt[shard] += 1.0;
      const double delta = val - mean[shard];
      mean[shard] += delta / cnt[shard];
      m2[shard] += delta * (val - mean[shard]);
    }
  });
  double n = 0.0, mu = 0.0, M2 = 0.0;
  for (int k = 0; k < kShards; ++k) {
    if (cnt[k] == 0.0) continue;
    const double tot = n + cnt[k];
    const double delta = mean[k] - mu;
    mu += delta * cnt[k] / tot;
    M2 += m2[k] + delta * delta * n * cnt[k] / tot;
    n = tot;
  }
  rep.lhs = mu;
  rep.lhs_stderr = std::sqrt(M2 / (n - 1.0) / n);
  rep.lhs_upper = rep.lhs + 3.0 * rep.lhs_stderr;
  rep.ratio = rep.lhs / rep.rhs;
  rep.ratio_upper = rep.lhs_upper / rep.rhs;
  return rep;
}

}  // namespace singlab
