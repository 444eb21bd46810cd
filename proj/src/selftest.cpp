#include "singlab/selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "singlab/diophantine.hpp"
#include "singlab/dynamics.hpp"
#include "singlab/exponents.hpp"
#include "singlab/exterior.hpp"
#include "singlab/ifs.hpp"
#include "singlab/transversality.hpp"

namespace singlab {

namespace {

long long scaled(double base, double scale) { return std::max(1LL, std::llround(base * scale)); }

ExteriorVector random_exterior(int n, int level, Rng& rng) {
  ExteriorVector v = ExteriorVector::zero(n, level);
  for (double& c : v.coords) c = rng.normal();
  return v;
}

double rel_gap(const ExteriorVector& a, const ExteriorVector& b) {
  double num = 0.0;
  for (std::size_t k = 0; k < a.coords.size(); ++k) num = std::max(num, std::abs(a.coords[k] - b.coords[k]));
  return num / (1.0 + std::max(a.norm(), b.norm()));
}

std::vector<IndexSet> subsets_avoiding_zero(int d, int size) {
  std::vector<IndexSet> out;
  for (const auto& I : exterior_basis(d, size)) {
    IndexSet J;
    for (int i : I) J.push_back(i + 1);
    out.push_back(J);
  }
  return out;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const std::vector<std::string>& presets, std::uint64_t seed, double scale) {
  std::vector<SuiteResult> out;
  std::vector<IfsSystem> systems;
  for (const auto& p : presets) systems.push_back(make_preset(p));

  {
    SuiteResult r{"similarity_dimension"};
    for (const auto& ifs : systems) {
      long double sum = 0.0L;
      for (double w : ifs.weights()) sum += w;
      const double err = std::abs(static_cast<double>(sum) - 1.0);
      r.worst = std::max(r.worst, err);
      ++r.cases;
      if (err > 1e-10) ++r.failures;
    }
    out.push_back(r);
  }

  {
    SuiteResult r{"moment_identity"};
    const int n_max = static_cast<int>(std::min<long long>(6, scaled(4, scale)));
    for (const auto& ifs : systems)
      for (double g : {-0.3, 0.0, 0.5, 1.0})
        for (int n = 0; n <= n_max; ++n) {
          const auto m = moment_identity_check(ifs, g, n);
          const double err = std::abs(m.lhs - m.rhs) / std::abs(m.rhs);
          r.worst = std::max(r.worst, err);
          ++r.cases;
          if (!(err <= 1e-10)) ++r.failures;
        }
    out.push_back(r);
  }

  {
    SuiteResult r{"osc_box"};
    for (const auto& ifs : systems) {
      if (!ifs.osc_box()) continue;
      ++r.cases;
      if (!check_osc_box(ifs, *ifs.osc_box())) ++r.failures;
    }
    if (r.cases == 0) r.cases = 1;
    out.push_back(r);
  }

  {
    SuiteResult r{"exterior_oracle"};
    Rng rng = Rng::stream(seed, 1);
    const long long cases = scaled(500, scale);
    for (long long c = 0; c < cases; ++c) {
      const int d = 1 + rng.below(3);
      const int level = 1 + rng.below(d + 1);
      const ExteriorVector v = random_exterior(d + 1, level, rng);
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-2.0, 2.0);
      const double t = std::exp(rng.uniform(-3.0, 3.0));
      const double e1 = rel_gap(apply_unipotent(x, v), apply_matrix(unipotent_matrix(x), v));
      const double e2 = rel_gap(apply_diagonal(t, v), apply_matrix(diagonal_matrix(t, d), v));
      const double err = std::max(e1, e2);
      r.worst = std::max(r.worst, err);
      ++r.cases;
      if (!(err <= 1e-12)) ++r.failures;
    }
    out.push_back(r);
  }

  {
    SuiteResult r{"transversality"};
    Rng rng = Rng::stream(seed, 2);
    const long long cases = scaled(2000, scale);
    for (long long c = 0; c < cases; ++c) {
      const int d = 1 + rng.below(3);
      const int level = 1 + rng.below(d);
      const ExteriorVector v = random_exterior(d + 1, level, rng);
      for (const auto& J : subsets_avoiding_zero(d, level)) {
        const double vj = std::pow(std::abs(v.at(J)), static_cast<double>(J.size()));
        const double defect = transversality_defect(v, J);
        const double err = std::max(0.0, -defect) / (1.0 + vj);
        r.worst = std::max(r.worst, err);
        ++r.cases;
        if (err > 1e-9) ++r.failures;
      }
    }
    out.push_back(r);
  }

  {
    SuiteResult r{"containment"};
    Rng rng = Rng::stream(seed, 3);
    const long long configs = scaled(20, scale);
    for (long long c = 0; c < configs; ++c) {
      const int d = 2 + rng.below(2);
      const int ell = 1 + rng.below(d - 1);
      const double kappa = std::array<double, 3>{1.0, 0.5, 0.1}[rng.below(3)];
      const double eps = rng.below(2) ? 1e-1 : 1e-3;
      const auto planes = random_transverse_planes(d, ell, kappa, rng);
      const auto rep = containment_check(planes, kappa, eps, 50, rng.next());
      r.worst = std::max(r.worst, rep.max_ratio / rep.C);
      r.cases += rep.accepted;
      r.failures += rep.violations;
    }
    out.push_back(r);
  }

  {
    SuiteResult r{"dirichlet_eps_one"};
    Rng rng = Rng::stream(seed, 4);
    const long long cases = scaled(200, scale);
    for (long long c = 0; c < cases; ++c) {
      const int d = 1 + rng.below(2);
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform();
      const double N = std::floor(std::exp(rng.uniform(std::log(2.0), std::log(2000.0))));
      ++r.cases;
      if (!dirichlet_test({x, 1.0, N}).solvable) ++r.failures;
    }
    out.push_back(r);
  }

  {
    SuiteResult r{"dimension_bound"};
    for (int d = 2; d <= 3; ++d) {
      std::vector<double> leb;
      for (int l = 1; l <= d; ++l) leb.push_back(l);
      const double err = std::abs(dimension_bound(d, d, leb).bound - d * d / (d + 1.0));
      r.worst = std::max(r.worst, err);
      ++r.cases;
      if (err > 1e-12) ++r.failures;
    }
    const double s = 2.0 * std::log(2.0) / std::log(3.0);
    const double err = std::abs(dimension_bound(s, 2, {std::log(2.0) / std::log(3.0), s}).bound - 2.0 * s / 3.0);
    r.worst = std::max(r.worst, err);
    ++r.cases;
    if (err > 1e-12) ++r.failures;
    out.push_back(r);
  }

  return out;
}

}  // namespace singlab
