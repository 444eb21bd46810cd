#include "singlab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace singlab {

long long dirichlet_bound(double N, int d) {
  if (d < 1) fail(ErrorCode::InvalidInput, "dimension must be positive");
  if (!(N >= 1.0) || !std::isfinite(N)) fail(ErrorCode::InvalidInput, "N must be at least 1");
  auto pow_le = [&](long long Q) {
    long double p = 1.0L;
    for (int i = 0; i < d; ++i) p *= static_cast<long double>(Q);
    return p <= static_cast<long double>(N);
  };
  long long Q = static_cast<long long>(std::floor(std::pow(N, 1.0 / d)));
  while (Q > 1 && !pow_le(Q)) --Q;
  while (pow_le(Q + 1)) ++Q;
  return std::max<long long>(Q, 1);
}

namespace {

// Visits q with ‖q‖∞ = r and first nonzero coordinate positive, in lexicographic order.
// The callback returns true to stop.
bool for_each_in_shell(int d, long long r, std::vector<long long>& q, const std::function<bool()>& fn) {
  std::function<bool(int, bool, bool)> rec = [&](int i, bool has_r, bool all_zero) -> bool {
    if (i == d) return has_r && fn();
    const long long lo = all_zero ? 0 : -r;
    if (i == d - 1 && !has_r) {
      // last coordinate must reach the shell
      for (long long v : {-r, r}) {
        if (v < lo) continue;
        q[i] = v;
        if (rec(i + 1, true, false)) return true;
      }
      return false;
    }
    for (long long v = lo; v <= r; ++v) {
      q[i] = v;
      if (rec(i + 1, has_r || std::llabs(v) == r, all_zero && v == 0)) return true;
    }
    return false;
  };
  return rec(0, false, true);
}

double form_value(const Vec& x, const std::vector<long long>& q, long long& p) {
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += static_cast<long double>(q[i]) * static_cast<long double>(x[i]);
  p = -static_cast<long long>(std::llround(s));
  return static_cast<double>(std::fabs(s + static_cast<long double>(p)));
}

void check_query(const Vec& x, double eps, double N) {
  if (x.size() < 1) fail(ErrorCode::InvalidInput, "x must be non-empty");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) fail(ErrorCode::InvalidInput, "x must be finite");
  if (!(eps > 0.0 && eps <= 1.0)) fail(ErrorCode::InvalidInput, "eps must lie in (0,1]");
  if (!(N >= 1.0)) fail(ErrorCode::InvalidInput, "N must be at least 1");
}

}  // namespace

DirichletResult dirichlet_test(const DirichletQuery& query) {
  check_query(query.x, query.eps, query.N);
  const int d = static_cast<int>(query.x.size());
  const long long Q = dirichlet_bound(query.N, d);
  const double target = query.eps / query.N;
  DirichletResult res;
  std::vector<long long> q(d, 0);
  for (long long r = 1; r <= Q && !res.solvable; ++r) {
    for_each_in_shell(d, r, q, [&] {
      long long p = 0;
      const double v = form_value(query.x, q, p);
      if (v <= target) {
        res.solvable = true;
        res.witness = DirichletWitness{p, q, v};
        return true;
      }
      return false;
    });
  }
  return res;
}

double dirichlet_ratio(const Vec& x, double N) {
  check_query(x, 1.0, N);
  const int d = static_cast<int>(x.size());
  const long long Q = dirichlet_bound(N, d);
  double best = std::numeric_limits<double>::infinity();
  std::vector<long long> q(d, 0);
  for (long long r = 1; r <= Q && best > 0.0; ++r) {
    for_each_in_shell(d, r, q, [&] {
      long long p = 0;
      best = std::min(best, form_value(x, q, p));
      return best == 0.0;
    });
  }
  return N * best;
}

ImprovabilityProfile improvability_profile(const Vec& x, const std::vector<double>& eps_ladder,
                                           const std::vector<double>& N_ladder,
                                           std::optional<std::size_t> tail_start) {
  if (eps_ladder.empty() || N_ladder.empty()) fail(ErrorCode::InvalidInput, "ladders must be non-empty");
  for (std::size_t i = 1; i < N_ladder.size(); ++i)
    if (!(N_ladder[i] > N_ladder[i - 1])) fail(ErrorCode::InvalidInput, "N ladder must be increasing");
  for (double e : eps_ladder) check_query(x, e, N_ladder.front());
  ImprovabilityProfile pr;
  pr.x = x;
  pr.eps_ladder = eps_ladder;
  pr.N_ladder = N_ladder;
  pr.tail_start = tail_start.value_or(N_ladder.size() / 2);
  if (pr.tail_start >= N_ladder.size()) fail(ErrorCode::InvalidInput, "tail start beyond the N ladder");
  // solvable(ε, N) ⇔ δ_N ≤ ε, since p = nearest integer is optimal for each q.
  for (double N : N_ladder) pr.ratio.push_back(dirichlet_ratio(x, N));
  pr.mean_ratio = std::accumulate(pr.ratio.begin(), pr.ratio.end(), 0.0) / pr.ratio.size();
  for (double e : eps_ladder) {
    std::vector<bool> row;
    std::optional<double> first;
    bool tail_ok = true;
    for (std::size_t j = 0; j < N_ladder.size(); ++j) {
      const bool ok = pr.ratio[j] <= e;
      row.push_back(ok);
      if (!ok && !first) first = N_ladder[j];
      if (!ok && j >= pr.tail_start) tail_ok = false;
    }
    pr.solvable.push_back(row);
    pr.first_failure.push_back(first);
    if (tail_ok && (!pr.score || e < *pr.score)) pr.score = e;
  }
  return pr;
}

ScanReport fractal_scan(const IfsSystem& ifs, int depth, const std::vector<double>& eps_ladder,
                        const std::vector<double>& N_ladder, double gamma,
                        const std::optional<std::vector<double>>& alphas, long long budget_cylinders, int threads) {
  if (depth < 0) fail(ErrorCode::InvalidInput, "depth must be non-negative");
  ScanReport rep;
  rep.depth = depth;
  rep.gamma = gamma;
  rep.eps_ladder = eps_ladder;
  rep.N_ladder = N_ladder;
  const double total = std::pow(static_cast<double>(ifs.size()), depth);
  std::vector<Word> words;
  if (depth == 0) {
    words.push_back(Word{});
  } else {
    const long long take = static_cast<long long>(std::min<double>(total, static_cast<double>(budget_cylinders)));
    // First `take` words in lexicographic order.
    Word w(depth, 0);
    for (long long c = 0; c < take; ++c) {
      words.push_back(w);
      for (int i = depth - 1; i >= 0; --i) {
        if (++w[i] < ifs.size()) break;
        w[i] = 0;
      }
    }
  }
  rep.truncated = total > static_cast<double>(budget_cylinders);
  const double e = ifs.sim_dim() - gamma;
  std::vector<ScanRow> rows(words.size());
  const auto smallest = std::min_element(eps_ladder.begin(), eps_ladder.end()) - eps_ladder.begin();
  parallel_for(words.size(), threads, [&](std::size_t i) {
    ScanRow row;
    row.word = words[i];
    // The empty word stands for the root cylinder; its representative is the first fixed point.
    row.representative = words[i].empty() ? ifs.map(0).fixed_point() : code_point(ifs, words[i]);
    const auto pr = improvability_profile(row.representative, eps_ladder, N_ladder);
    row.first_failure = pr.first_failure;
    for (std::size_t k = 0; k < eps_ladder.size(); ++k) {
      bool ok = true;
      for (std::size_t j = pr.tail_start; j < N_ladder.size(); ++j) ok = ok && pr.solvable[k][j];
      row.improvable.push_back(ok);
    }
    row.flagged = row.improvable[smallest];
    row.diam_pow = std::pow(cylinder_info(ifs, words[i]).diameter, e);
    rows[i] = std::move(row);
  });
  rep.fraction_improvable.assign(eps_ladder.size(), 0.0);
  rep.cover_sum.assign(eps_ladder.size(), 0.0);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < eps_ladder.size(); ++k)
      if (row.improvable[k]) {
        rep.fraction_improvable[k] += 1.0 / static_cast<double>(rows.size());
        rep.cover_sum[k] += row.diam_pow;
      }
    if (row.flagged) {
      ++rep.flagged;
      rep.flagged_sum += row.diam_pow;
    }
  }
  rep.rows = std::move(rows);
  if (alphas) rep.dimension_bound = singlab::dimension_bound(ifs.sim_dim(), ifs.dim(), *alphas).bound;
  if (rep.truncated) throw PartialResult<ScanReport>("cylinder budget exceeded", rep);
  return rep;
}

DaniPoint dani_point(const IfsSystem& ifs, const std::string& label, const Vec& x, const HeightParams& params,
                     const ExcursionSpec& spec, const std::vector<double>& eps_ladder,
                     const std::vector<double>& N_ladder, double cusp_threshold) {
  DaniPoint pt;
  pt.label = label;
  pt.x = x;
  const auto pr = improvability_profile(x, eps_ladder, N_ladder);
  pt.score = pr.mean_ratio;
  pt.discrete_score = pr.score;
  const auto smallest = std::min_element(eps_ladder.begin(), eps_ladder.end()) - eps_ladder.begin();
  pt.improvable = true;
  for (std::size_t j = pr.tail_start; j < N_ladder.size(); ++j) pt.improvable = pt.improvable && pr.solvable[smallest][j];
  const OrbitTrace tr = orbit_heights(ifs, x, Lattice::standard(ifs.dim() + 1), params, spec);
  pt.min_shortest = std::numeric_limits<double>::infinity();
  for (const auto& e : tr.epochs) pt.min_shortest = std::min(pt.min_shortest, 1.0 / e.phi[0]);
  pt.divergent = 1.0 / tr.epochs.back().phi[0] < cusp_threshold;
  return pt;
}

DaniReport dani_crosscheck(const IfsSystem& ifs, const std::vector<std::pair<std::string, Vec>>& panel,
                           const HeightParams& params, const ExcursionSpec& spec,
                           const std::vector<double>& eps_ladder, const std::vector<double>& N_ladder,
                           double cusp_threshold, int threads) {
  if (panel.size() < 2) fail(ErrorCode::InvalidInput, "panel needs at least two points");
  DaniReport rep;
  rep.epochs = spec.N;
  rep.cusp_threshold = cusp_threshold;
  rep.points.resize(panel.size());
  parallel_for(panel.size(), threads, [&](std::size_t i) {
    rep.points[i] = dani_point(ifs, panel[i].first, panel[i].second, params, spec, eps_ladder, N_ladder,
                               cusp_threshold);
  });
  std::vector<double> a, b;
  int agree = 0;
  for (const auto& p : rep.points) {
    a.push_back(p.score);
    b.push_back(p.min_shortest);
    if (p.improvable == p.divergent) ++agree;
  }
  rep.spearman = spearman(a, b);
  rep.agreement = static_cast<double>(agree) / static_cast<double>(rep.points.size());
  return rep;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) fail(ErrorCode::InvalidInput, "need two equal-length samples");
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<long long> continued_fraction(double x, int terms) {
  if (!std::isfinite(x) || terms < 1) fail(ErrorCode::InvalidInput, "need a finite x and at least one term");
  std::vector<long long> cf;
  long double y = x;
  for (int i = 0; i < terms; ++i) {
    const long double a = std::floor(y);
    cf.push_back(static_cast<long long>(a));
    const long double frac = y - a;
    if (frac < 1e-15L) break;
    y = 1.0L / frac;
  }
  return cf;
}

std::vector<long long> convergent_denominators(const std::vector<long long>& cf) {
  std::vector<long long> q;
  long long prev = 0, cur = 1;
  for (std::size_t i = 0; i < cf.size(); ++i) {
    if (i == 0) {
      q.push_back(1);
      continue;
    }
    const long long next = cf[i] * cur + prev;
    prev = cur;
    cur = next;
    q.push_back(cur);
  }
  return q;
}

}  // namespace singlab
