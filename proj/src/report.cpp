#include "singlab/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace singlab {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json bracket(const MassBracket& b) { return Json{{"lower", b.lower}, {"upper", b.upper}}; }

// Shortest text that round-trips.
std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

Json to_json(const IfsSystem& ifs) {
  Json maps = Json::array();
  for (const auto& m : ifs.maps())
    maps.push_back({{"ratio", m.ratio}, {"rotation", to_json(m.rotation)}, {"translation", to_json(m.translation)}});
  return Json{{"name", ifs.name()},       {"dim", ifs.dim()},         {"maps", maps},
              {"s", ifs.sim_dim()},       {"diam_K", ifs.diam_K()},   {"norm_bound", ifs.norm_bound()},
              {"weights", ifs.weights()}, {"exact", ifs.exact().has_value()}};
}

Json to_json(const ScalingFit& fit) {
  Json ladder = Json::array();
  for (std::size_t i = 0; i < fit.eps.size(); ++i) {
    Json row = bracket(fit.values[i]);
    row["eps"] = fit.eps[i];
    if (i < fit.details.size()) row["directions"] = fit.details[i].directions;
    ladder.push_back(row);
  }
  return Json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"residual", fit.residual},
              {"lower_slope", fit.lower_slope},
              {"uncertainty", fit.uncertainty},
              {"ladder", ladder}};
}

Json to_json(const RotationCocycleResult& r) {
  return Json{{"estimate", r.estimate}, {"per_n", r.per_n}, {"increments", r.increments},
              {"increment_estimate", r.increment_estimate}, {"D", r.D}, {"angle", r.angle}, {"rho", r.rho}};
}

Json to_json(const DimensionBound& b) {
  return Json{{"bound", b.bound}, {"varpi", b.varpi}, {"beta", b.beta}};
}

Json to_json(const HeightParams& p) {
  return Json{{"eps", p.eps},     {"rho_exp", p.rho_exp}, {"alphas", p.alphas}, {"varpi", p.varpi},
              {"betas", p.betas}, {"beta", p.beta},       {"gamma", p.gamma},   {"gamma0", p.gamma0}};
}

Json to_json(const PhiResult& r) {
  return Json{{"value", r.value},   {"covolume", r.covolume}, {"certified", r.certified},
              {"radius", r.radius}, {"via_dual", r.via_dual}, {"coeffs", r.coeffs}};
}

Json to_json(const IsolationReport& r) {
  return Json{{"F", r.F},           {"threshold", r.threshold},  {"active", r.active},
              {"counts", r.counts}, {"level_max", r.level_max}, {"certified", r.certified}};
}

Json to_json(const ContainmentReport& r) {
  return Json{{"ell", r.ell},       {"kappa", r.kappa},         {"eps", r.eps},
              {"wedge_norm", r.wedge_norm}, {"C", r.C},         {"max_ratio", r.max_ratio},
              {"accepted", r.accepted},     {"proposals", r.proposals}, {"violations", r.violations}};
}

Json to_json(const ExpansionReport& r) {
  return Json{{"lhs", r.lhs},         {"lhs_stderr", r.lhs_stderr},   {"lhs_upper", r.lhs_upper},
              {"rhs", r.rhs},         {"ratio", r.ratio},             {"ratio_upper", r.ratio_upper},
              {"samples", r.samples}, {"tau_depth", r.tau_depth}};
}

Json to_json(const OrbitTrace& t) {
  Json epochs = Json::array();
  for (const auto& e : t.epochs) epochs.push_back({{"l", e.l}, {"rho", e.rho}, {"f", e.f}, {"phi", e.phi}});
  return Json{{"point", to_json(t.point)},
              {"initial_height", t.initial_height},
              {"epochs", epochs},
              {"certified", t.certified}};
}

Json to_json(const ContractionReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"f", s.f},
                       {"lhs", s.lhs},
                       {"stderr", s.stderr_},
                       {"rhs_shape", s.rhs_shape},
                       {"ratio", s.ratio},
                       {"in_fit", s.in_fit},
                       {"satisfied", s.satisfied}});
  Json sweep = Json::array();
  for (const auto& p : r.sweep)
    sweep.push_back({{"gamma", p.gamma}, {"c", p.c}, {"xi", p.xi}, {"zeta", p.zeta}, {"factor", p.factor}});
  return Json{{"k", r.k},
              {"gamma", r.gamma},
              {"drift", r.drift},
              {"drift_closed", r.drift_closed},
              {"c", r.c},
              {"T", r.T},
              {"fitted", r.fitted},
              {"violations", r.violations},
              {"samples", samples},
              {"margulis_criterion", r.margulis_criterion},
              {"margulis_value", r.margulis_value},
              {"sweep", sweep},
              {"c_uniform", r.c_uniform},
              {"best_c", r.best_c},
              {"best_factor", r.best_factor},
              {"best_gamma", r.best_gamma},
              {"criterion_fitted", r.criterion_fitted},
              {"criterion_proof_constant", r.criterion_proof_constant},
              {"delta", r.delta},
              {"A", r.A}};
}

Json to_json(const DimensionEstimate& e) {
  return Json{{"N", e.N},
              {"sums", e.sums},
              {"nodes", e.nodes},
              {"log_rate", e.log_rate},
              {"strictly_decreasing", e.strictly_decreasing},
              {"truncated", e.truncated}};
}

Json to_json(const ImprovabilityProfile& p) {
  Json ff = Json::array();
  for (const auto& f : p.first_failure) ff.push_back(opt(f));
  Json solv = Json::array();
  for (const auto& row : p.solvable) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b);
    solv.push_back(r);
  }
  return Json{{"x", to_json(p.x)},
              {"eps_ladder", p.eps_ladder},
              {"N_ladder", p.N_ladder},
              {"solvable", solv},
              {"ratio", p.ratio},
              {"first_failure", ff},
              {"tail_start", p.tail_start},
              {"score", opt(p.score)},
              {"mean_ratio", p.mean_ratio}};
}

Json to_json(const ScanReport& r, bool include_rows) {
  Json j{{"depth", r.depth},
         {"gamma", r.gamma},
         {"eps_ladder", r.eps_ladder},
         {"N_ladder", r.N_ladder},
         {"fraction_improvable", r.fraction_improvable},
         {"cover_sum", r.cover_sum},
         {"flagged", r.flagged},
         {"flagged_sum", r.flagged_sum},
         {"dimension_bound", opt(r.dimension_bound)},
         {"cylinders", r.rows.size()},
         {"truncated", r.truncated}};
  if (include_rows) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
      Json ff = Json::array();
      for (const auto& f : row.first_failure) ff.push_back(opt(f));
      Json imp = Json::array();
      for (bool b : row.improvable) imp.push_back(b);
      rows.push_back({{"word", word_string(row.word)},
                      {"representative", to_json(row.representative)},
                      {"first_failure", ff},
                      {"improvable", imp},
                      {"flagged", row.flagged},
                      {"diam_pow", row.diam_pow}});
    }
    j["rows"] = rows;
  }
  return j;
}

Json to_json(const DaniReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"label", p.label},
                   {"x", to_json(p.x)},
                   {"score", p.score},
                   {"discrete_score", opt(p.discrete_score)},
                   {"min_shortest", p.min_shortest},
                   {"improvable", p.improvable},
                   {"divergent", p.divergent}});
  return Json{{"points", pts},
              {"spearman", r.spearman},
              {"agreement", r.agreement},
              {"epochs", r.epochs},
              {"cusp_threshold", r.cusp_threshold}};
}

Json error_envelope(const std::string& code, const std::string& message) {
  return Json{{"error", {{"code", code}, {"message", message}}}};
}

Json error_envelope(const Error& e) { return error_envelope(error_code_name(e.code()), e.what()); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string word_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

std::string orbit_csv(const OrbitTrace& t) {
  std::ostringstream os;
  std::size_t nphi = t.epochs.empty() ? 0 : t.epochs.front().phi.size();
  os << "l,rho,f";
  for (std::size_t i = 1; i <= nphi; ++i) os << ",phi_" << i;
  os << "\n";
  for (const auto& e : t.epochs) {
    os << e.l << ',' << fmt(e.rho) << ',' << fmt(e.f);
    for (double v : e.phi) os << ',' << fmt(v);
    os << "\n";
  }
  return os.str();
}

std::string scan_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "# truncated: " << (r.truncated ? "true" : "false") << "\n";
  os << "# depth: " << r.depth << ", gamma: " << fmt(r.gamma) << ", cylinders: " << r.rows.size() << "\n";
  os << "word,diam_pow,flagged";
  for (double e : r.eps_ladder) os << ",first_failure@" << fmt(e);
  for (double e : r.eps_ladder) os << ",improvable@" << fmt(e);
  for (Eigen::Index i = 0; i < (r.rows.empty() ? 0 : r.rows.front().representative.size()); ++i) os << ",x" << i + 1;
  os << "\n";
  for (const auto& row : r.rows) {
    os << (row.word.empty() ? std::string("-") : word_string(row.word)) << ',' << fmt(row.diam_pow) << ','
       << (row.flagged ? 1 : 0);
    for (const auto& f : row.first_failure) os << ',' << (f ? fmt(*f) : std::string());
    for (bool b : row.improvable) os << ',' << (b ? 1 : 0);
    for (Eigen::Index i = 0; i < row.representative.size(); ++i) os << ',' << fmt(row.representative[i]);
    os << "\n";
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot rename into " + path);
  }
}

}  // namespace singlab
