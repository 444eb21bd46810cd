#include "singlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace singlab {

void ExcursionSpec::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidInput, "delta must lie in (0,1)");
  if (N < 1 || k < 1) fail(ErrorCode::InvalidInput, "N and k must be at least 1");
  if (!(M > 0.0)) fail(ErrorCode::InvalidInput, "M must be positive");
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidInput, "gamma must be finite");
}

namespace {

double word_ratio(const IfsSystem& ifs, const Word& w) {
  double r = 1.0;
  for (int i : w) r *= ifs.map(i).ratio;
  return r;
}

Lattice flowed(const Vec& x, double rho, const Lattice& y) {
  const int d = static_cast<int>(x.size());
  return Lattice{diagonal_matrix(rho, d) * unipotent_matrix(x) * y.basis};
}

}  // namespace

double epoch_height(const IfsSystem& ifs, const Word& w, const Lattice& y, const HeightParams& params) {
  return margulis_height(flowed(code_point(ifs, w), word_ratio(ifs, w), y), params).f;
}

OrbitTrace orbit_heights(const IfsSystem& ifs, const Vec& x, const Lattice& x0, const HeightParams& params,
                         const ExcursionSpec& spec) {
  spec.validate();
  if (x.size() != ifs.dim()) fail(ErrorCode::InvalidInput, "point dimension does not match the IFS");
  if (x0.n() != ifs.dim() + 1) fail(ErrorCode::InvalidInput, "lattice must live in R^{d+1}");
  Lattice::make(x0.basis);
  OrbitTrace tr;
  tr.point = x;
  const HeightValue h0 = margulis_height(x0, params);
  tr.initial_height = h0.f;
  tr.certified = h0.certified;
  const Word w = assign_word(ifs, x, spec.N * spec.k);
  // Flow incrementally from a reduced basis so round-off stays relative to the current epoch.
  Mat B = lll_reduce(unipotent_matrix(x) * x0.basis);
  double rho_prev = 1.0;
  for (int l = 1; l <= spec.N; ++l) {
    const double rho = rho_cocycle(ifs, w, l * spec.k);
    B = lll_reduce(diagonal_matrix(rho / rho_prev, ifs.dim()) * B);
    rho_prev = rho;
    const HeightValue h = margulis_height(Lattice{B}, params);
    tr.epochs.push_back({l, rho, h.f, h.phi});
    tr.certified = tr.certified && h.certified;
  }
  return tr;
}

double divergence_fraction(const std::vector<double>& heights, double M) {
  if (heights.empty()) fail(ErrorCode::InvalidInput, "trace is empty");
  const auto below = std::count_if(heights.begin(), heights.end(), [&](double f) { return f <= M; });
  return static_cast<double>(below) / static_cast<double>(heights.size());
}

double divergence_fraction(const OrbitTrace& trace, double M) {
  std::vector<double> f;
  for (const auto& e : trace.epochs) f.push_back(e.f);
  return divergence_fraction(f, M);
}

std::size_t BadWordSet::word_count(int alphabet) const {
  std::size_t n = 0;
  for (const auto& p : prefixes) {
    std::size_t c = 1;
    for (std::size_t k = p.size(); k < static_cast<std::size_t>(full_depth); ++k) c *= alphabet;
    n += c;
  }
  return n;
}

std::vector<Word> BadWordSet::expand(int alphabet) const {
  std::vector<Word> out;
  for (const auto& p : prefixes) {
    const int rest = full_depth - static_cast<int>(p.size());
    if (rest == 0) {
      out.push_back(p);
      continue;
    }
    for (const auto& tail : all_words(alphabet, rest)) {
      Word w = p;
      w.insert(w.end(), tail.begin(), tail.end());
      out.push_back(std::move(w));
    }
  }
  return out;
}

BadWordSet enumerate_bad_words(const IfsSystem& ifs, const Lattice& x0, const HeightParams& params,
                               const ExcursionSpec& spec, long long budget_nodes) {
  spec.validate();
  if (x0.n() != ifs.dim() + 1) fail(ErrorCode::InvalidInput, "lattice must live in R^{d+1}");
  BadWordSet out;
  out.full_depth = spec.N * spec.k;
  // smallest count strictly above δN
  const int need = static_cast<int>(std::floor(spec.delta * spec.N)) + 1;
  Word w;
  w.reserve(out.full_depth);
  std::function<void(int)> rec = [&](int bad) {
    if (++out.nodes > budget_nodes) {
      out.truncated = true;
      throw PartialResult<BadWordSet>("node budget exceeded", out);
    }
    const int depth = static_cast<int>(w.size());
    if (depth > 0 && depth % spec.k == 0) {
      if (epoch_height(ifs, w, x0, params) > spec.M) ++bad;
      const int remaining = spec.N - depth / spec.k;
      if (bad >= need) {
        out.prefixes.push_back(w);
        return;
      }
      if (bad + remaining < need) return;
    }
    if (depth == out.full_depth) return;
    for (int i = 0; i < ifs.size(); ++i) {
      w.push_back(i);
      rec(bad);
      w.pop_back();
    }
  };
  rec(0);
  return out;
}

double hausdorff_sum(const IfsSystem& ifs, const std::vector<Word>& words, double gamma) {
  if (words.empty()) return 0.0;
  const double e = ifs.sim_dim() - gamma;
  const double K = ifs.diam_K();
  double sum = 0.0;
  for (const auto& w : words) {
    if (w.size() != words[0].size()) fail(ErrorCode::InvalidInput, "words must share one length");
    sum += std::pow(K * word_ratio(ifs, w), e);
  }
  return sum;
}

double hausdorff_sum(const IfsSystem& ifs, const BadWordSet& set, double gamma) {
  const double e = ifs.sim_dim() - gamma;
  const double K = ifs.diam_K();
  double tail = 0.0;
  for (const auto& m : ifs.maps()) tail += std::pow(m.ratio, e);
  double sum = 0.0;
  for (const auto& p : set.prefixes)
    sum += std::pow(K * word_ratio(ifs, p), e) * std::pow(tail, set.full_depth - static_cast<int>(p.size()));
  return sum;
}

MomentCheck moment_identity_check(const IfsSystem& ifs, double gamma, int n) {
  if (n < 0 || n > 10) fail(ErrorCode::InvalidInput, "n must lie in 0..10");
  const double e = ifs.sim_dim() + gamma;
  std::vector<long double> pw;
  long double one = 0.0L;
  for (const auto& m : ifs.maps()) {
    pw.push_back(std::pow(static_cast<long double>(m.ratio), static_cast<long double>(e)));
    one += pw.back();
  }
  // Exhaustive sum over Λ^n, depth-first with running products.
  long double lhs = 0.0L;
  std::function<void(int, long double)> rec = [&](int depth, long double prod) {
    if (depth == n) {
      lhs += prod;
      return;
    }
    for (long double p : pw) rec(depth + 1, prod * p);
  };
  rec(0, 1.0L);
  return {static_cast<double>(lhs), static_cast<double>(std::pow(one, static_cast<long double>(n)))};
}

ContractionReport contraction_audit(const IfsSystem& ifs, const HeightParams& params, int k,
                                    const std::vector<Lattice>& y_samples, int mc_per_cylinder, std::uint64_t seed,
                                    const ContractionOptions& opts) {
  const int d = ifs.dim();
  if (params.d() != d) fail(ErrorCode::InvalidInput, "params dimension does not match the IFS");
  const double top = params.rho_exp * params.beta;
  if (params.gamma < params.gamma0 - 1e-12 || params.gamma > top + 1e-12)
    fail(ErrorCode::InvalidInput, "gamma must lie in [gamma0, rho*beta]");
  if (k < 1 || mc_per_cylinder < 2 || y_samples.empty())
    fail(ErrorCode::InvalidInput, "need k >= 1, mc_per_cylinder >= 2 and a non-empty panel");
  if (!(opts.quantile >= 0.0 && opts.quantile < 1.0)) fail(ErrorCode::InvalidInput, "quantile must lie in [0,1)");
  if (!(opts.delta > 0.0 && opts.delta < 1.0)) fail(ErrorCode::InvalidInput, "delta must lie in (0,1)");
  for (const auto& y : y_samples)
    if (y.n() != d + 1) fail(ErrorCode::InvalidInput, "panel lattices must live in R^{d+1}");

  const double s = ifs.sim_dim();
  const auto words = all_words(ifs.size(), k);
  std::vector<double> rho(words.size());
  std::vector<SimilarityMap> maps;
  maps.reserve(words.size());
  ContractionReport rep;
  rep.k = k;
  rep.gamma = params.gamma;
  rep.delta = opts.delta;
  rep.A = opts.A;
  for (std::size_t j = 0; j < words.size(); ++j) {
    rho[j] = word_ratio(ifs, words[j]);
    maps.push_back(compose_word(ifs, words[j]));
    rep.drift += std::pow(rho[j], s + 1.0);
  }
  double one_step = 0.0;
  for (const auto& m : ifs.maps()) one_step += std::pow(m.ratio, s + 1.0);
  rep.drift_closed = std::pow(one_step, k);

  // Per-cylinder means and variances of f(g_ρω u(x) y), x ~ μ|K_ω; independent of γ.
  const int suffix = static_cast<int>(std::ceil(std::log(1e-13) / std::log(ifs.max_ratio())));
  const std::size_t ny = y_samples.size();
  std::vector<double> fy(ny);
  std::vector<std::vector<double>> mean(ny), var(ny);
  parallel_for(ny, opts.threads, [&](std::size_t yi) {
    const Lattice& y = y_samples[yi];
    fy[yi] = margulis_height(y, params).f;
    Rng rng = Rng::stream(seed, yi);
    mean[yi].resize(words.size());
    var[yi].resize(words.size());
    for (std::size_t j = 0; j < words.size(); ++j) {
      double a = 0.0, a2 = 0.0;
      for (int m = 0; m < mc_per_cylinder; ++m) {
        const Word tail = random_word(ifs, rng, suffix);
        const Vec x = maps[j].apply(code_point(ifs, tail));
        const double f = margulis_height(flowed(x, rho[j], y), params).f;
        a += f;
        a2 += f * f;
      }
      const double mu = a / mc_per_cylinder;
      mean[yi][j] = mu;
      var[yi][j] = std::max(0.0, (a2 / mc_per_cylinder - mu * mu) * mc_per_cylinder / (mc_per_cylinder - 1.0));
    }
  });

  std::vector<double> sorted = fy;
  std::sort(sorted.begin(), sorted.end());
  rep.T = sorted[static_cast<std::size_t>(std::floor(opts.quantile * (ny - 1)))];

  struct Fit {
    double c;
    std::vector<ContractionSample> samples;
  };
  auto fit = [&](double gamma) {
    Fit out{1.0, {}};
    const double drift_pow = std::pow(rep.drift, top - gamma);
    for (std::size_t yi = 0; yi < ny; ++yi) {
      ContractionSample cs;
      cs.f = fy[yi];
      double v = 0.0;
      for (std::size_t j = 0; j < words.size(); ++j) {
        const double w = std::pow(rho[j], s - gamma);
        cs.lhs += w * mean[yi][j];
        v += w * w * var[yi][j] / mc_per_cylinder;
      }
      cs.stderr_ = std::sqrt(v);
      cs.rhs_shape = cs.f * drift_pow;
      cs.ratio = cs.lhs / cs.rhs_shape;
      cs.in_fit = cs.f > rep.T;
      if (cs.in_fit) out.c = std::max(out.c, cs.ratio);
      out.samples.push_back(cs);
    }
    for (auto& cs : out.samples) cs.satisfied = cs.lhs - 3.0 * cs.stderr_ <= out.c * cs.rhs_shape * (1.0 + 1e-12);
    return out;
  };

  Fit main = fit(params.gamma);
  rep.c = main.c;
  rep.samples = std::move(main.samples);
  for (const auto& cs : rep.samples) {
    if (!cs.in_fit) continue;
    ++rep.fitted;
    if (!cs.satisfied) ++rep.violations;
  }
  rep.margulis_value = rep.c * std::pow(rep.drift, top);
  rep.margulis_criterion = rep.margulis_value < 1.0;

  // γ must sit strictly inside (max(γ0,0), ϱβ) for ζ < 1 < ξ.
  rep.c_uniform = rep.c;
  const double lo = std::max(params.gamma0, 0.0);
  const int G = std::max(opts.gamma_grid, 2);
  double best = std::numeric_limits<double>::infinity();
  double best_proof = std::numeric_limits<double>::infinity();
  for (int j = 1; j < G; ++j) {
    CriterionPoint cp;
    cp.gamma = lo + (top - lo) * j / G;
    cp.c = fit(cp.gamma).c;
    for (const auto& m : ifs.maps()) cp.xi += std::pow(m.ratio, s - cp.gamma);
    cp.zeta = std::pow(one_step, top - cp.gamma);
    cp.factor = std::pow(std::pow(cp.zeta, opts.delta) * std::pow(cp.xi, 1.0 - opts.delta), k);
    rep.c_uniform = std::max(rep.c_uniform, cp.c);
    // c and the factor must be taken at the same γ
    if (cp.c * cp.factor < best) {
      best = cp.c * cp.factor;
      rep.best_gamma = cp.gamma;
      rep.best_c = cp.c;
      rep.best_factor = cp.factor;
    }
    best_proof = std::min(best_proof, 2.0 * std::pow(cp.c * opts.A, 3) * cp.factor);
    rep.sweep.push_back(cp);
  }
  rep.criterion_fitted = best < 1.0;
  rep.criterion_proof_constant = best_proof < 1.0;
  return rep;
}

std::vector<Lattice> random_lattice_panel(int d, int count, double max_depth, std::uint64_t seed) {
  if (d < 1 || count < 1 || !(max_depth >= 0.0)) fail(ErrorCode::InvalidInput, "invalid panel request");
  const int n = d + 1;
  Rng rng(seed);
  std::vector<Lattice> out;
  for (int c = 0; c < count; ++c) {
    Mat G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(G);
    Mat K = qr.householderQ() * Mat::Identity(n, n);
    if (K.determinant() < 0) K.col(0) = -K.col(0);
    Mat U = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) U(i, j) = rng.uniform(-1.0, 1.0);
    Vec t(n);
    for (int i = 0; i < n; ++i) t[i] = rng.normal();
    t.array() -= t.mean();
    const double depth = count == 1 ? max_depth : max_depth * c / (count - 1);
    const double scale = t.cwiseAbs().maxCoeff();
    if (scale > 0) t *= depth / scale;
    Mat D = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = std::exp(t[i]);
    out.push_back(Lattice{K * D * U});
  }
  return out;
}

double measure_log_lipschitz(const IfsSystem& ifs, const HeightParams& params, const std::vector<Lattice>& panel,
                             int x_samples, std::uint64_t seed) {
  const int d = ifs.dim();
  const double R = ifs.norm_bound();
  Rng rng(seed);
  double A = 1.0;
  for (const auto& y : panel) {
    const double f0 = margulis_height(y, params).f;
    for (int m = 0; m < x_samples; ++m) {
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.normal();
      x *= 2.0 * R * std::pow(rng.uniform(), 1.0 / d) / x.norm();
      const double f1 = margulis_height(y.acted(unipotent_matrix(x)), params).f;
      A = std::max({A, f1 / f0, f0 / f1});
    }
  }
  return A;
}

DimensionEstimate dimension_estimate(const IfsSystem& ifs, const Lattice& x0, const HeightParams& params,
                                     ExcursionSpec spec, int N_max, long long budget_nodes) {
  if (N_max < 1) fail(ErrorCode::InvalidInput, "N_max must be at least 1");
  DimensionEstimate est;
  for (int N = 1; N <= N_max; ++N) {
    spec.N = N;
    BadWordSet set;
    try {
      set = enumerate_bad_words(ifs, x0, params, spec, budget_nodes);
    } catch (const PartialResult<BadWordSet>& e) {
      est.truncated = true;
      break;
    }
    est.N.push_back(N);
    est.sums.push_back(hausdorff_sum(ifs, set, spec.gamma));
    est.nodes.push_back(set.nodes);
  }
  est.strictly_decreasing = est.sums.size() >= 2;
  for (std::size_t i = 1; i < est.sums.size(); ++i)
    if (!(est.sums[i] < est.sums[i - 1])) est.strictly_decreasing = false;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < est.sums.size(); ++i)
    if (est.sums[i] > 0) {
      xs.push_back(est.N[i]);
      ys.push_back(std::log(est.sums[i]));
    }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    est.log_rate = sxy / sxx;
  } else {
    est.log_rate = -std::numeric_limits<double>::infinity();
  }
  return est;
}

}  // namespace singlab
