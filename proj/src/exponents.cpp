#include "singlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace singlab {

AffineSubspace AffineSubspace::make(const Mat& normals, const Vec& offset) {
  if (normals.cols() != offset.size() || normals.rows() < 1 || normals.rows() > offset.size())
    fail(ErrorCode::InvalidInput, "subspace normals have the wrong shape");
  const Mat g = normals * normals.transpose();
  if ((g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorCode::InvalidInput, "subspace normals are not orthonormal");
  return AffineSubspace{normals, offset};
}

// ------------------------------------------------------------------ sorting

namespace {

std::uint64_t order_bits(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return (u >> 63) ? ~u : (u | 0x8000000000000000ULL);
}

// Stable LSD radix sort of (key, payload) by key.
template <class Payload>
void radix_sort(std::vector<std::uint64_t>& keys, std::vector<Payload>& pay) {
  const std::size_t n = keys.size();
  std::vector<std::uint64_t> k2(n);
  std::vector<Payload> p2(n);
  std::uint64_t all_or = 0, all_and = ~0ULL;
  for (auto k : keys) {
    all_or |= k;
    all_and &= k;
  }
  for (int shift = 0; shift < 64; shift += 16) {
    if ((((all_or ^ all_and) >> shift) & 0xFFFF) == 0) continue;  // constant digit
    std::vector<std::size_t> count(65537, 0);
    for (auto k : keys) ++count[((k >> shift) & 0xFFFF) + 1];
    for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dst = count[(keys[i] >> shift) & 0xFFFF]++;
      k2[dst] = keys[i];
      p2[dst] = pay[i];
    }
    keys.swap(k2);
    pay.swap(p2);
  }
}

void sort_by_value(std::vector<double>& vals, std::vector<double>& w) {
  std::vector<std::uint64_t> keys(vals.size());
  std::vector<std::pair<double, double>> pay(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    keys[i] = order_bits(vals[i]);
    pay[i] = {vals[i], w[i]};
  }
  radix_sort(keys, pay);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = pay[i].first;
    w[i] = pay[i].second;
  }
}

}  // namespace

// ------------------------------------------------------------------- clouds

double CylinderCloud::projected_half_width(std::size_t j, const Vec& n) const {
  if (!box_mode) return ratios[j] * ball_radius;
  double h = 0.0;
  if (rotations.empty()) {
    for (int k = 0; k < dim; ++k) h += std::abs(n[k]) * half_widths[k];
  } else {
    const double* r = &rotations[j * dim * dim];
    for (int k = 0; k < dim; ++k) {
      double c = 0.0;  // (R^T n)_k
      for (int i = 0; i < dim; ++i) c += r[i * dim + k] * n[i];
      h += std::abs(c) * half_widths[k];
    }
  }
  return ratios[j] * h;
}

double CylinderCloud::radius(std::size_t j) const {
  return ratios[j] * (box_mode ? half_widths.norm() : ball_radius);
}

CylinderCloud build_cloud(const IfsSystem& ifs, double depth_eps) {
  const int d = ifs.dim();
  CylinderCloud c;
  c.dim = d;
  c.box_mode = ifs.box_nested();
  c.half_widths = ifs.box().half_widths();
  c.ball_radius = ifs.ball_radius();
  const Vec c0 = c.box_mode ? ifs.box().center() : ifs.ball_center();
  bool rotates = false;
  for (const auto& m : ifs.maps())
    if (m.rotation != Mat::Identity(d, d)) rotates = true;

  auto emit = [&](const SimilarityMap& h) {
    const Vec p = h.apply(c0);
    for (int k = 0; k < d; ++k) c.centers.push_back(p[k]);
    c.ratios.push_back(h.ratio);
    c.masses.push_back(std::pow(h.ratio, ifs.sim_dim()));
    if (rotates)
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) c.rotations.push_back(h.rotation(i, k));
  };
  if (!(depth_eps < 1.0)) {
    emit(SimilarityMap::identity(d));
    return c;
  }
  const double thr = depth_eps * (1.0 + 1e-12);
  std::vector<SimilarityMap> stack{SimilarityMap::identity(d)};
  std::vector<int> next{0};
  while (!next.empty()) {
    int& i = next.back();
    if (i >= ifs.size()) {
      next.pop_back();
      stack.pop_back();
      continue;
    }
    const SimilarityMap h = stack.back().compose(ifs.map(i++));
    if (h.ratio <= thr) {
      emit(h);
    } else {
      stack.push_back(h);
      next.push_back(0);
    }
  }
  return c;
}

MassBracket line_mass(const CylinderCloud& cloud, const AffineSubspace& L, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidInput, "eps must be positive");
  if (L.ambient_dim() != cloud.dim) fail(ErrorCode::InvalidInput, "subspace dimension mismatch");
  const int d = cloud.dim;
  MassBracket b;
  Vec c(d);
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    for (int k = 0; k < d; ++k) c[k] = cloud.centers[j * d + k];
    double dist, h;
    if (L.codim() == 1) {
      const Vec n = L.normals.row(0).transpose();
      dist = std::abs(n.dot(c - L.offset));
      h = cloud.projected_half_width(j, n);
    } else {
      dist = L.distance(c);
      h = cloud.radius(j);
    }
    if (dist + h < eps) b.lower += cloud.masses[j];
    if (dist - h < eps) b.upper += cloud.masses[j];
  }
  b.lower = std::min(b.lower, 1.0);
  b.upper = std::min(b.upper, 1.0);
  return b;
}

MassBracket line_mass(const IfsSystem& ifs, const AffineSubspace& L, double eps, double depth_eps) {
  if (!(depth_eps > 0.0) || depth_eps > eps) fail(ErrorCode::InvalidInput, "need 0 < depth_eps <= eps");
  return line_mass(build_cloud(ifs, depth_eps), L, eps);
}

// ------------------------------------------------------------ offset sweeps

namespace {

struct Stab {
  double best = 0.0;
  double where = 0.0;
};

// Max total weight of points in an open window of half-length r.
Stab window_max(const std::vector<double>& p, const std::vector<double>& w, double r) {
  Stab s;
  if (r <= 0.0) return s;
  double cur = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (j < i) {
      j = i;
      cur = 0.0;
    }
    while (j < p.size() && p[j] - p[i] < 2.0 * r) cur += w[j++];
    if (cur > s.best) {
      s.best = cur;
      s.where = 0.5 * (p[i] + p[j - 1]);
    }
    cur -= w[i];
  }
  return s;
}

// Max weight over points of open intervals (p_j - r_j, p_j + r_j).
Stab interval_stab(const std::vector<double>& p, const std::vector<double>& r, const std::vector<double>& w) {
  std::vector<double> st, en, ws, we;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (r[j] <= 0.0) continue;
    st.push_back(p[j] - r[j]);
    en.push_back(p[j] + r[j]);
    ws.push_back(w[j]);
    we.push_back(w[j]);
  }
  sort_by_value(st, ws);
  sort_by_value(en, we);
  Stab s;
  double cur = 0.0;
  std::size_t e = 0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    while (e < en.size() && en[e] <= st[i]) cur -= we[e++];
    cur += ws[i];
    if (cur > s.best) {
      s.best = cur;
      const double nxt = (i + 1 < st.size()) ? std::min(st[i + 1], en[e]) : en[e];
      s.where = 0.5 * (st[i] + nxt);
    }
  }
  return s;
}

constexpr int kCellBits = 21;

struct BlockMax {
  double best = 0.0;
  std::uint64_t key = 0;
};

// Max over axis-aligned blocks of `block` cells per axis of the summed cell masses.
BlockMax block_max(std::vector<std::uint64_t> keys, std::vector<double> vals, int ell, int block) {
  auto merge = [](std::vector<std::uint64_t>& k, std::vector<double>& v) {
    radix_sort(k, v);
    std::size_t o = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (o > 0 && k[o - 1] == k[i]) {
        v[o - 1] += v[i];
      } else {
        k[o] = k[i];
        v[o] = v[i];
        ++o;
      }
    }
    k.resize(o);
    v.resize(o);
  };
  merge(keys, vals);
  for (int a = 0; a < ell; ++a) {
    std::vector<std::uint64_t> nk;
    std::vector<double> nv;
    nk.reserve(keys.size() * block);
    nv.reserve(keys.size() * block);
    for (std::size_t i = 0; i < keys.size(); ++i)
      for (int o = 0; o < block; ++o) {
        nk.push_back(keys[i] - (static_cast<std::uint64_t>(o) << (kCellBits * a)));
        nv.push_back(vals[i]);
      }
    keys.swap(nk);
    vals.swap(nv);
    merge(keys, vals);
  }
  BlockMax b;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (vals[i] > b.best) {
      b.best = vals[i];
      b.key = keys[i];
    }
  return b;
}

}  // namespace

SupResult sup_over_offsets(const CylinderCloud& cloud, const Mat& normals, double eps) {
  const int d = cloud.dim;
  const int ell = static_cast<int>(normals.rows());
  const std::size_t n = cloud.size();
  SupResult res;
  res.best_normals = normals;
  res.best_offset = Vec::Zero(d);
  res.directions = 1;
  if (ell == 1) {
    const Vec nv = normals.row(0).transpose();
    std::vector<double> p(n), h(n);
    bool equal_h = true;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += nv[k] * cloud.centers[j * d + k];
      p[j] = s;
      h[j] = cloud.projected_half_width(j, nv);
      if (h[j] != h[0]) equal_h = false;
    }
    Stab up, lo;
    if (equal_h) {
      std::vector<double> ps = p, ws = cloud.masses;
      sort_by_value(ps, ws);
      up = window_max(ps, ws, eps + h[0]);
      lo = window_max(ps, ws, eps - h[0]);
    } else {
      std::vector<double> ru(n), rl(n);
      for (std::size_t j = 0; j < n; ++j) {
        ru[j] = eps + h[j];
        rl[j] = eps - h[j];
      }
      up = interval_stab(p, ru, cloud.masses);
      lo = interval_stab(p, rl, cloud.masses);
    }
    res.bracket = MassBracket{std::min(lo.best, 1.0), std::min(up.best, 1.0)};
    res.best_offset = up.where * nv;
    return res;
  }

  // ℓ ≥ 2: separable block sums on a sparse grid in the normal space.
  std::vector<double> P(n * ell);
  double hmax = 0.0;
  Vec pmin = Vec::Constant(ell, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j) {
    for (int a = 0; a < ell; ++a) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += normals(a, k) * cloud.centers[j * d + k];
      P[j * ell + a] = s;
      pmin[a] = std::min(pmin[a], s);
    }
    hmax = std::max(hmax, cloud.radius(j));
  }
  const int m = 3;
  const double w = 2.0 * (eps + hmax) / m;
  const int margin = m + 2;
  std::vector<std::uint64_t> keys(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t key = 0;
    for (int a = 0; a < ell; ++a) {
      const double idx = std::floor((P[j * ell + a] - pmin[a]) / w) + margin;
      if (idx >= static_cast<double>((1 << kCellBits) - margin))
        fail(ErrorCode::InvalidInput, "eps too small for the sparse window grid");
      key |= static_cast<std::uint64_t>(idx) << (kCellBits * a);
    }
    keys[j] = key;
  }
  auto anchor_point = [&](std::uint64_t key, int block) {
    Vec a(ell);
    for (int k = 0; k < ell; ++k) {
      const double idx = static_cast<double>((key >> (kCellBits * k)) & ((1u << kCellBits) - 1)) - margin;
      a[k] = pmin[k] + (idx + 0.5 * block) * w;
    }
    return a;
  };
  const BlockMax up = block_max(keys, cloud.masses, ell, m + 1);
  double lower = 0.0;
  const double inner = eps - hmax;
  if (inner > 0.0) {
    int k = static_cast<int>(std::ceil(2.0 * inner / (w * std::sqrt(static_cast<double>(ell))))) - 1;
    if (k >= 1) lower = block_max(keys, cloud.masses, ell, k).best;
  }
  // A subspace through a cylinder center captures that cylinder whole.
  for (std::size_t j = 0; j < n; ++j)
    if (cloud.radius(j) < eps) lower = std::max(lower, cloud.masses[j]);
  res.bracket = MassBracket{std::min(lower, 1.0), std::min(up.best, 1.0)};
  res.best_offset = normals.transpose() * anchor_point(up.key, m + 1);
  return res;
}

std::vector<Mat> direction_grid(const IfsSystem& ifs, int ell, int directions) {
  const int d = ifs.dim();
  if (ell < 1 || ell > d) fail(ErrorCode::InvalidInput, "codimension out of range");
  if (ell == d) return {Mat::Identity(d, d)};
  if (directions < 1) fail(ErrorCode::InvalidInput, "direction grid must be non-empty");
  std::vector<Mat> out;
  if (d == 2) {
    std::vector<double> angles;
    for (int j = 0; j < directions; ++j) angles.push_back(M_PI * j / directions);
    for (const auto& m : ifs.maps())
      for (int k = 0; k < 2; ++k) {
        double a = std::atan2(m.rotation(1, k), m.rotation(0, k));
        a = std::fmod(a + 2.0 * M_PI, M_PI);
        if (a >= M_PI - 1e-15) a = 0.0;
        angles.push_back(a);
      }
    std::sort(angles.begin(), angles.end());
    std::vector<double> uniq;
    for (double a : angles)
      if (uniq.empty() || a - uniq.back() > 1e-12) uniq.push_back(a);
    for (double a : uniq) {
      Mat n(1, 2);
      n << std::cos(a), std::sin(a);
      out.push_back(n);
    }
    return out;
  }
  if (d != 3) fail(ErrorCode::InvalidInput, "direction grids are implemented for d <= 3");
  std::vector<Vec> dirs;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < directions; ++i) {
    const double z = 1.0 - (i + 0.5) / directions;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec u(3);
    u << r * std::cos(golden * i), r * std::sin(golden * i), z;
    dirs.push_back(u);
  }
  for (const auto& m : ifs.maps())
    for (int k = 0; k < 3; ++k) dirs.push_back(m.rotation.col(k));
  std::vector<Vec> uniq;
  for (const auto& u : dirs) {
    bool dup = false;
    for (const auto& v : uniq) dup = dup || std::abs(std::abs(u.dot(v)) - 1.0) < 1e-13;
    if (!dup) uniq.push_back(u);
  }
  for (const auto& u : uniq) {
    if (ell == 1) {
      out.push_back(u.transpose());
    } else {
      // Orthonormal frame of u's complement.
      Vec a = std::abs(u[0]) < 0.9 ? Vec::Unit(3, 0) : Vec::Unit(3, 1);
      Vec e1 = (a - a.dot(u) * u).normalized();
      Eigen::Vector3d uu = u, ee = e1;
      Vec e2 = uu.cross(ee);
      Mat n(2, 3);
      n.row(0) = e1.transpose();
      n.row(1) = e2.transpose();
      out.push_back(n);
    }
  }
  return out;
}

SupResult sup_line_mass(const IfsSystem& ifs, int ell, double eps, const SearchBudget& budget) {
  if (ell < 1 || ell > ifs.dim()) fail(ErrorCode::InvalidInput, "codimension out of range");
  if (!(eps > 0.0)) fail(ErrorCode::InvalidInput, "eps must be positive");
  const CylinderCloud cloud = build_cloud(ifs, eps * budget.resolution);
  const auto grid = direction_grid(ifs, ell, budget.directions);
  std::vector<SupResult> per(grid.size());
  parallel_for(grid.size(), budget.threads, [&](std::size_t i) { per[i] = sup_over_offsets(cloud, grid[i], eps); });
  SupResult best = per.front();
  double lower = 0.0;
  for (const auto& r : per) {
    if (r.bracket.upper > best.bracket.upper) best = r;
    lower = std::max(lower, r.bracket.lower);
  }
  best.bracket.lower = lower;
  best.directions = static_cast<int>(grid.size());
  return best;
}

// ------------------------------------------------------------------ fitting

std::vector<double> geometric_ladder(double first, double ratio, int count) {
  std::vector<double> out;
  double e = first;
  for (int i = 0; i < count; ++i, e *= ratio) out.push_back(e);
  return out;
}

namespace {

std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

ScalingFit fit_scaling(const std::vector<double>& eps, const std::vector<MassBracket>& values) {
  if (eps.size() < 3) fail(ErrorCode::InvalidInput, "ladder too short (need at least 3 points)");
  if (eps.size() != values.size()) fail(ErrorCode::InvalidInput, "ladder/value length mismatch");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1])) fail(ErrorCode::InvalidInput, "eps ladder must be strictly decreasing");
  ScalingFit f;
  f.eps = eps;
  f.values = values;
  std::vector<double> x, yu, yl;
  bool lower_ok = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(values[i].upper > 0.0)) fail(ErrorCode::InvalidInput, "upper bracket vanished; cannot fit");
    x.push_back(std::log(eps[i]));
    yu.push_back(std::log(values[i].upper));
    if (values[i].lower > 0.0) yl.push_back(std::log(values[i].lower));
    else lower_ok = false;
  }
  std::tie(f.slope, f.intercept) = least_squares(x, yu);
  for (std::size_t i = 1; i < x.size(); ++i)
    f.residual = std::max(f.residual, std::abs((yu[i] - yu[i - 1]) / (x[i] - x[i - 1]) - f.slope));
  if (lower_ok) {
    f.lower_slope = least_squares(x, yl).first;
    f.uncertainty = std::abs(f.slope - f.lower_slope);
  } else {
    f.lower_slope = std::numeric_limits<double>::quiet_NaN();
    f.uncertainty = std::numeric_limits<double>::infinity();
  }
  return f;
}

ScalingFit alpha_estimate(const IfsSystem& ifs, int ell, const std::vector<double>& eps_ladder,
                          const SearchBudget& budget) {
  if (eps_ladder.size() < 3) fail(ErrorCode::InvalidInput, "ladder too short (need at least 3 points)");
  const double q = eps_ladder[1] / eps_ladder[0];
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (std::abs(eps_ladder[i] / eps_ladder[i - 1] - q) > 1e-9 * q)
      fail(ErrorCode::InvalidInput, "eps ladder must be geometric");
  if (q < ifs.min_ratio() * (1 - 1e-9) || q > ifs.max_ratio() * (1 + 1e-9))
    fail(ErrorCode::InvalidInput, "ladder ratio must lie in [rho_min, rho_max]");
  std::vector<MassBracket> vals;
  std::vector<SupResult> det;
  for (double e : eps_ladder) {
    det.push_back(sup_line_mass(ifs, ell, e, budget));
    vals.push_back(det.back().bracket);
  }
  ScalingFit f = fit_scaling(eps_ladder, vals);
  f.details = std::move(det);
  return f;
}

ScalingFit frostman_projection(const IfsSystem& ifs, const Vec& direction, const std::vector<double>& eps_ladder,
                               const SearchBudget& budget) {
  if (ifs.dim() != 2) fail(ErrorCode::InvalidInput, "frostman_projection needs d = 2");
  if (direction.size() != 2 || !(direction.norm() > 0.0)) fail(ErrorCode::InvalidInput, "zero direction");
  const Mat n = direction.normalized().transpose();
  std::vector<MassBracket> vals;
  std::vector<SupResult> det;
  for (double e : eps_ladder) {
    const CylinderCloud cloud = build_cloud(ifs, e * budget.resolution);
    det.push_back(sup_over_offsets(cloud, n, e));
    vals.push_back(det.back().bracket);
  }
  ScalingFit f = fit_scaling(eps_ladder, vals);
  f.details = std::move(det);
  return f;
}

int doubling_constant(double A) { return static_cast<int>(std::ceil(A)) + 1; }

RotationCocycleResult rotation_cocycle_bound(const IfsSystem& ifs, int n_max, int theta_grid) {
  if (ifs.dim() != 2) fail(ErrorCode::InvalidInput, "rotation cocycle bound needs d = 2");
  if (n_max < 1 || theta_grid < 1) fail(ErrorCode::InvalidInput, "n_max and theta_grid must be positive");
  const auto& m0 = ifs.map(0);
  for (const auto& m : ifs.maps())
    if (std::abs(m.ratio - m0.ratio) > 1e-12 * m0.ratio || (m.rotation - m0.rotation).cwiseAbs().maxCoeff() > 1e-12)
      fail(ErrorCode::InvalidInput, "IFS is not homogeneous");
  const double angle = std::atan2(m0.rotation(1, 0), m0.rotation(0, 0));
  const double t = angle / M_PI;
  for (int q = 1; q <= 1000; ++q)
    if (std::abs(t * q - std::round(t * q)) < 1e-9 * q)
      fail(ErrorCode::InvalidInput, "rotation angle is a rational multiple of pi");
  RotationCocycleResult r;
  r.rho = m0.ratio;
  r.angle = angle;
  r.D = doubling_constant(1.0 + ifs.diam_K());
  r.estimate = -std::numeric_limits<double>::infinity();
  double prev_mean = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double e = std::pow(r.rho, n);
    const CylinderCloud cloud = build_cloud(ifs, e);
    double acc = 0.0;
    for (int j = 0; j < theta_grid; ++j) {
      const double th = M_PI * j / theta_grid;
      Mat nrm(1, 2);
      nrm << std::cos(th), std::sin(th);
      const double tau = sup_over_offsets(cloud, nrm, e).bracket.upper;
      acc += std::log(tau) + std::log(static_cast<double>(r.D));
    }
    const double v = acc / theta_grid / (n * std::log(r.rho));
    const double mean = acc / theta_grid - std::log(static_cast<double>(r.D));
    r.increments.push_back((mean - prev_mean) / std::log(r.rho));
    prev_mean = mean;
    r.per_n.push_back(v);
    r.estimate = std::max(r.estimate, v);
  }
  r.increment_estimate = r.increments.back();
  return r;
}

DimensionBound dimension_bound(double s, int d, const std::vector<double>& alphas) {
  if (static_cast<int>(alphas.size()) != d) fail(ErrorCode::InvalidInput, "alphas must have length d");
  DimensionBound b;
  b.varpi = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= d; ++l) {
    const double a = alphas[l - 1];
    if (a < -1e-12 || a > s + 1e-12) fail(ErrorCode::InvalidInput, "alpha out of [0, s]");
    b.varpi = std::min(b.varpi, a * (d - l + 1));
  }
  b.beta = b.varpi / (d + 1);
  b.bound = s - b.beta;
  return b;
}

std::vector<double> small_codim_bound(double s, int d) {
  if (!(s > d - 1)) fail(ErrorCode::NotApplicable, "small codimension bound needs s > d - 1");
  std::vector<double> out;
  for (int l = 1; l <= d; ++l) out.push_back(s - d + l);
  return out;
}

}  // namespace singlab
