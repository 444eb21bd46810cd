#include "singlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "singlab/diophantine.hpp"
#include "singlab/dynamics.hpp"
#include "singlab/exponents.hpp"
#include "singlab/selftest.hpp"

#ifndef SINGLAB_DATA_DIR
#define SINGLAB_DATA_DIR "data"
#endif

namespace singlab {

namespace {

struct ParamSpec {
  const char* key;
  const char* help;
};

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<ParamSpec> params;
  bool needs_ifs = true;
};

const std::vector<ParamSpec> kLadder = {
    {"eps_first", "largest scale of the geometric eps ladder"},
    {"eps_ratio", "ladder ratio, within [rho_min, rho_max]"},
    {"eps_count", "number of ladder points"},
    {"directions", "direction grid size"},
    {"resolution", "cylinder depth relative to eps"},
};

const std::vector<ParamSpec> kHeight = {
    {"eps", "height parameter epsilon"},
    {"rho_exp", "height exponent rho"},
    {"alphas", "comma list of alpha_1..alpha_d, or from-file"},
    {"alphas_file", "JSON file with alphas (defaults to the shipped preset file)"},
    {"gamma", "gamma; omitted means rho*beta"},
};

std::vector<ParamSpec> join(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> specs = {
      {"alpha", "alpha_l exponents by subspace-neighbourhood mass scaling",
       join({{"ell", "codimension (default: every level 1..d)"}}, kLadder)},
      {"frostman", "projected Frostman exponent along a direction (d = 2)",
       join({{"direction", "comma list, e.g. 1,0"}}, kLadder)},
      {"rotcocycle", "rotation cocycle bound for homogeneous planar systems",
       {{"n_max", "largest word length"}, {"theta_grid", "angles per word length"}}},
      {"contraction", "contraction hypothesis audit",
       join({{"k", "single epoch length"},
             {"k_max", "sweep k = 1..k_max"},
             {"panel_size", "lattices in the test panel"},
             {"panel_depth", "largest cusp depth in the panel"},
             {"mc", "Monte Carlo tails per cylinder"},
             {"quantile", "quantile of f defining T"},
             {"delta", "criterion exponent delta"},
             {"gamma_grid", "gamma values in the criterion sweep"},
             {"a", "log-Lipschitz slack A"}},
            kHeight)},
      {"orbit", "height trace along the fractal flow",
       join({{"x", "comma list point (default: a random point of the attractor)"},
             {"word_depth", "depth of the random coding word"},
             {"epochs", "number of epochs N"},
             {"k", "epoch length"},
             {"m", "excursion threshold M"},
             {"delta", "divergence fraction delta"}},
            kHeight)},
      {"scan", "Dirichlet improvability scan over cylinders",
       join({{"depth", "cylinder depth"},
             {"eps_ladder", "comma list of eps values"},
             {"n_first", "first N of the geometric N ladder"},
             {"n_ratio", "N ladder ratio"},
             {"n_count", "N ladder length"}},
            kHeight)},
      {"dimbound", "dimension bound s - varpi/(d+1)",
       join({{"estimate_n", "also run the bad-word dimension estimate up to this N"},
             {"k", "epoch length for the estimate"},
             {"m", "excursion threshold M"},
             {"delta", "divergence fraction delta"}},
            kHeight)},
      {"selftest", "invariant suites on presets", {{"scale", "case-count multiplier"}}, false},
  };
  return specs;
}

const CommandSpec& command_spec(const std::string& name) {
  for (const auto& c : commands())
    if (name == c.name) return c;
  std::string list;
  for (const auto& c : commands()) list += (list.empty() ? "" : ", ") + std::string(c.name);
  fail(ErrorCode::Validation, "unknown command '" + name + "'; known commands: " + list);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string dashed(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return key;
}

double literal_number(const std::string& text, const std::string& field) {
  try {
    return parse_rational(text).convert_to<double>();
  } catch (...) {
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (...) {
  }
  fail(ErrorCode::Validation, field + ": not a number: '" + text + "'");
}

// Flag text to a JSON value: numbers, booleans, comma lists, else a string.
Json flag_value(const std::string& text) {
  if (text.find(',') != std::string::npos) {
    Json arr = Json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(flag_value(item));
    return arr;
  }
  if (text == "true") return true;
  if (text == "false") return false;
  try {
    Json j = Json::parse(text);
    if (j.is_number()) return j;
  } catch (...) {
  }
  if (text.find('/') != std::string::npos) {
    try {
      return parse_rational(text).convert_to<double>();
    } catch (...) {
    }
  }
  return text;
}

// Reads command parameters with defaults and records every value used.
class Params {
 public:
  Params(const Json& src, const CommandSpec& spec) : src_(src) {
    for (auto it = src.begin(); it != src.end(); ++it) {
      bool known = false;
      for (const auto& p : spec.params) known = known || it.key() == p.key;
      if (!known) fail(ErrorCode::Validation, "params." + it.key() + ": not a parameter of " + spec.name);
    }
  }

  bool has(const std::string& key) const { return src_.contains(key) && !src_[key].is_null(); }

  double number(const std::string& key, double def) {
    double v = def;
    if (has(key)) v = as_number(src_[key], key);
    used_[key] = v;
    return v;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) {
      used_[key] = nullptr;
      return std::nullopt;
    }
    const double v = as_number(src_[key], key);
    used_[key] = v;
    return v;
  }

  long long integer(const std::string& key, long long def, long long lo, long long hi) {
    long long v = def;
    if (has(key)) {
      const double x = as_number(src_[key], key);
      if (x != std::floor(x)) fail(ErrorCode::Validation, "params." + key + ": expected an integer");
      v = static_cast<long long>(x);
    }
    if (v < lo || v > hi)
      fail(ErrorCode::Validation,
           "params." + key + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    used_[key] = v;
    return v;
  }

  std::vector<double> list(const std::string& key, const std::vector<double>& def) {
    std::vector<double> v = def;
    if (has(key)) {
      v.clear();
      const Json& j = src_[key];
      if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_number(j[i], key + "[" + std::to_string(i) + "]"));
      } else {
        v.push_back(as_number(j, key));
      }
    }
    used_[key] = v;
    return v;
  }

  std::string string(const std::string& key, const std::string& def) {
    std::string v = def;
    if (has(key)) {
      if (!src_[key].is_string()) fail(ErrorCode::Validation, "params." + key + ": expected a string");
      v = src_[key].get<std::string>();
    }
    used_[key] = v;
    return v;
  }

  const Json& raw(const std::string& key) const { return src_[key]; }
  void record(const std::string& key, Json v) { used_[key] = std::move(v); }
  const Json& used() const { return used_; }

 private:
  static double as_number(const Json& j, const std::string& key) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return literal_number(j.get<std::string>(), "params." + key);
    fail(ErrorCode::Validation, "params." + key + ": expected a number");
  }

  Json src_;
  Json used_ = Json::object();
};

std::vector<double> alphas_from_file(const std::string& path, int d) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    fail(ErrorCode::Validation, path + ": malformed JSON: " + e.what());
  }
  std::vector<double> a;
  auto num = [&](const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return literal_number(j.get<std::string>(), path);
    fail(ErrorCode::Validation, path + ": alphas must be numbers");
  };
  if (doc.contains("alphas")) {
    for (const auto& v : doc["alphas"]) a.push_back(num(v));
  } else if (doc.contains("result") && doc["result"].contains("results")) {
    // Output of the alpha command: one slope per level.
    std::map<int, double> by_level;
    for (const auto& r : doc["result"]["results"]) by_level[r.at("ell").get<int>()] = r.at("slope").get<double>();
    for (const auto& [l, v] : by_level) a.push_back(v);
  } else {
    fail(ErrorCode::Validation, path + ": expected an 'alphas' array or an alpha report");
  }
  if (static_cast<int>(a.size()) != d)
    fail(ErrorCode::Validation, path + ": expected " + std::to_string(d) + " alphas, found " + std::to_string(a.size()));
  return a;
}

std::vector<double> resolve_alphas(Params& p, const IfsSystem& ifs) {
  const int d = ifs.dim();
  if (p.has("alphas") && !(p.raw("alphas").is_string() && p.raw("alphas").get<std::string>() == "from-file")) {
    auto a = p.list("alphas", {});
    if (static_cast<int>(a.size()) != d)
      fail(ErrorCode::Validation, "params.alphas: expected " + std::to_string(d) + " values");
    return a;
  }
  const std::string def = (std::filesystem::path(data_dir()) / "alphas" / (ifs.name() + ".json")).string();
  const std::string path = p.string("alphas_file", def);
  auto a = alphas_from_file(path, d);
  p.record("alphas", a);
  p.record("alphas_source", "from-file");
  return a;
}

HeightParams height_params(Params& p, const IfsSystem& ifs) {
  const double eps = p.number("eps", 0.5);
  const double rho = p.number("rho_exp", 0.5);
  const auto alphas = resolve_alphas(p, ifs);
  const auto gamma = p.optional_number("gamma");
  return HeightParams::make(eps, rho, alphas, gamma ? *gamma : NAN);
}

std::vector<double> eps_ladder(Params& p, const IfsSystem& ifs) {
  const double ratio = p.number("eps_ratio", ifs.max_ratio());
  const double first = p.number("eps_first", std::pow(ratio, 4));
  const int count = static_cast<int>(p.integer("eps_count", 6, 3, 60));
  return geometric_ladder(first, ratio, count);
}

SearchBudget search_budget(Params& p, int threads) {
  SearchBudget b;
  b.directions = static_cast<int>(p.integer("directions", b.directions, 1, 1'000'000));
  b.resolution = p.number("resolution", b.resolution);
  b.threads = threads;
  return b;
}

struct Outcome {
  Json result;
  std::string csv;
  std::string text;  // plain stdout line for commands that print a value
  int status = 0;
};

// Shortest text that round-trips.
std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Outcome cmd_alpha(const RunConfig& c, Params& p) {
  const IfsSystem& ifs = *c.ifs;
  std::vector<int> levels;
  if (p.has("ell")) {
    levels.push_back(static_cast<int>(p.integer("ell", 1, 1, ifs.dim())));
  } else {
    for (int l = 1; l <= ifs.dim(); ++l) levels.push_back(l);
    p.record("ell", levels);
  }
  const auto ladder = eps_ladder(p, ifs);
  const auto budget = search_budget(p, c.threads);
  Outcome o;
  o.result["results"] = Json::array();
  std::ostringstream csv;
  csv << "ell,eps,lower,upper,slope,lower_slope\n";
  for (int l : levels) {
    const auto fit = alpha_estimate(ifs, l, ladder, budget);
    Json j = to_json(fit);
    j["ell"] = l;
    o.result["results"].push_back(j);
    for (std::size_t i = 0; i < fit.eps.size(); ++i)
      csv << l << ',' << fmt(fit.eps[i]) << ',' << fmt(fit.values[i].lower) << ',' << fmt(fit.values[i].upper) << ','
          << fmt(fit.slope) << ',' << fmt(fit.lower_slope) << "\n";
  }
  o.csv = csv.str();
  return o;
}

Outcome cmd_frostman(const RunConfig& c, Params& p) {
  const IfsSystem& ifs = *c.ifs;
  const auto dir = p.list("direction", {1.0, 0.0});
  Vec v(dir.size());
  for (std::size_t i = 0; i < dir.size(); ++i) v[i] = dir[i];
  const auto ladder = eps_ladder(p, ifs);
  const auto budget = search_budget(p, c.threads);
  const auto fit = frostman_projection(ifs, v, ladder, budget);
  Outcome o;
  o.result = to_json(fit);
  std::ostringstream csv;
  csv << "eps,lower,upper,slope\n";
  for (std::size_t i = 0; i < fit.eps.size(); ++i)
    csv << fmt(fit.eps[i]) << ',' << fmt(fit.values[i].lower) << ',' << fmt(fit.values[i].upper) << ','
        << fmt(fit.slope) << "\n";
  o.csv = csv.str();
  return o;
}

Outcome cmd_rotcocycle(const RunConfig& c, Params& p) {
  const int n_max = static_cast<int>(p.integer("n_max", 8, 1, 40));
  const int grid = static_cast<int>(p.integer("theta_grid", 64, 1, 1'000'000));
  const auto r = rotation_cocycle_bound(*c.ifs, n_max, grid);
  Outcome o;
  o.result = to_json(r);
  std::ostringstream csv;
  csv << "n,value\n";
  for (std::size_t i = 0; i < r.per_n.size(); ++i) csv << i + 1 << ',' << fmt(r.per_n[i]) << "\n";
  o.csv = csv.str();
  return o;
}

Outcome cmd_contraction(const RunConfig& c, Params& p) {
  const IfsSystem& ifs = *c.ifs;
  const HeightParams hp = height_params(p, ifs);
  int k_lo = 1, k_hi = 0;
  if (p.has("k")) {
    k_lo = k_hi = static_cast<int>(p.integer("k", 1, 1, 12));
  } else {
    k_hi = static_cast<int>(p.integer("k_max", 4, 1, 12));
  }
  const int panel_size = static_cast<int>(p.integer("panel_size", 100, 1, 100000));
  const double depth = p.number("panel_depth", 10.0);
  const int mc = static_cast<int>(p.integer("mc", 4, 1, 1'000'000));
  ContractionOptions opts;
  opts.quantile = p.number("quantile", 0.5);
  opts.delta = p.number("delta", opts.delta);
  opts.gamma_grid = static_cast<int>(p.integer("gamma_grid", opts.gamma_grid, 1, 10000));
  opts.A = p.number("a", opts.A);
  opts.threads = c.threads;

  const auto panel = random_lattice_panel(ifs.dim(), panel_size, depth, c.seed);
  Outcome o;
  o.result["height"] = to_json(hp);
  o.result["audits"] = Json::array();
  Json first_k = nullptr;
  std::ostringstream csv;
  csv << "k,drift,c,T,fitted,violations,margulis_value,c_uniform,best_c,best_factor,best_gamma,criterion_fitted,"
         "criterion_proof_constant\n";
  for (int k = k_lo; k <= k_hi; ++k) {
    const double samples = static_cast<double>(panel_size) * mc * std::pow(ifs.size(), k);
    if (samples > static_cast<double>(c.budget_samples)) {
      o.status = 2;
      break;
    }
    const auto r = contraction_audit(ifs, hp, k, panel, mc, c.seed + static_cast<std::uint64_t>(k), opts);
    o.result["audits"].push_back(to_json(r));
    if (r.criterion_fitted && first_k.is_null()) first_k = k;
    csv << k << ',' << fmt(r.drift) << ',' << fmt(r.c) << ',' << fmt(r.T) << ',' << r.fitted << ',' << r.violations
        << ',' << fmt(r.margulis_value) << ',' << fmt(r.c_uniform) << ',' << fmt(r.best_c) << ',' << fmt(r.best_factor) << ','
        << fmt(r.best_gamma) << ',' << (r.criterion_fitted ? 1 : 0) << ',' << (r.criterion_proof_constant ? 1 : 0)
        << "\n";
  }
  o.result["first_k_criterion"] = first_k;
  o.result["truncated"] = o.status == 2;
  o.csv = csv.str();
  return o;
}

Outcome cmd_orbit(const RunConfig& c, Params& p) {
  const IfsSystem& ifs = *c.ifs;
  const HeightParams hp = height_params(p, ifs);
  ExcursionSpec spec;
  spec.N = static_cast<int>(p.integer("epochs", 6, 1, 1000));
  spec.k = static_cast<int>(p.integer("k", 1, 1, 60));
  spec.M = p.number("m", spec.M);
  spec.delta = p.number("delta", spec.delta);
  spec.gamma = hp.gamma;
  Vec x;
  if (p.has("x")) {
    const auto xs = p.list("x", {});
    x = Vec(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) x[i] = xs[i];
  } else {
    const int depth = static_cast<int>(p.integer("word_depth", 40, 1, 200));
    Rng rng(c.seed);
    x = code_point(ifs, random_word(ifs, rng, depth));
    p.record("x", std::vector<double>(x.data(), x.data() + x.size()));
  }
  const auto trace = orbit_heights(ifs, x, Lattice::standard(ifs.dim() + 1), hp, spec);
  Outcome o;
  o.result = to_json(trace);
  o.result["divergence_fraction"] = divergence_fraction(trace, spec.M);
  o.csv = orbit_csv(trace);
  return o;
}

Outcome cmd_scan(const RunConfig& c, Params& p) {
  const IfsSystem& ifs = *c.ifs;
  const int depth = static_cast<int>(p.integer("depth", 3, 0, 30));
  const auto el = p.list("eps_ladder", {0.1, 0.2, 0.4, 0.8});
  const double nf = p.number("n_first", 10.0);
  const double nr = p.number("n_ratio", 10.0);
  const int nc = static_cast<int>(p.integer("n_count", 4, 1, 200));
  const auto Nl = geometric_ladder(nf, nr, nc);
  const double gamma = p.number("gamma", 0.0);
  std::optional<std::vector<double>> alphas;
  if (p.has("alphas") || p.has("alphas_file")) alphas = resolve_alphas(p, ifs);
  Outcome o;
  ScanReport rep;
  try {
    rep = fractal_scan(ifs, depth, el, Nl, gamma, alphas, c.budget_nodes, c.threads);
  } catch (const PartialResult<ScanReport>& e) {
    rep = e.partial();
    rep.truncated = true;
    o.status = 2;
  }
  o.result = to_json(rep, true);
  o.csv = scan_csv(rep);
  return o;
}

Outcome cmd_dimbound(const RunConfig& c, Params& p) {
  const IfsSystem& ifs = *c.ifs;
  const auto alphas = resolve_alphas(p, ifs);
  const auto b = dimension_bound(ifs.sim_dim(), ifs.dim(), alphas);
  Outcome o;
  o.result = to_json(b);
  o.result["s"] = ifs.sim_dim();
  char line[64];
  std::snprintf(line, sizeof line, "%.12f\n", b.bound);
  o.text = line;
  std::ostringstream csv;
  csv << "bound,varpi,beta,s\n" << fmt(b.bound) << ',' << fmt(b.varpi) << ',' << fmt(b.beta) << ','
      << fmt(ifs.sim_dim()) << "\n";
  const int n_est = static_cast<int>(p.integer("estimate_n", 0, 0, 60));
  if (n_est > 0) {
    const double eps = p.number("eps", 0.5);
    const double rho = p.number("rho_exp", 0.5);
    const auto gamma = p.optional_number("gamma");
    const auto hp = HeightParams::make(eps, rho, alphas, gamma ? *gamma : NAN);
    ExcursionSpec spec;
    spec.k = static_cast<int>(p.integer("k", 1, 1, 60));
    spec.M = p.number("m", spec.M);
    spec.delta = p.number("delta", spec.delta);
    spec.gamma = hp.gamma;
    const auto est = dimension_estimate(ifs, Lattice::standard(ifs.dim() + 1), hp, spec, n_est, c.budget_nodes);
    o.result["estimate"] = to_json(est);
    if (est.truncated) o.status = 2;
    csv << "# estimate\nN,sum,nodes\n";
    for (std::size_t i = 0; i < est.N.size(); ++i)
      csv << est.N[i] << ',' << fmt(est.sums[i]) << ',' << est.nodes[i] << "\n";
  }
  o.csv = csv.str();
  return o;
}

Outcome cmd_selftest(const RunConfig& c, Params& p) {
  const double scale = p.number("scale", 1.0);
  if (!(scale > 0.0)) fail(ErrorCode::Validation, "params.scale: must be positive");
  std::vector<std::string> presets;
  if (c.ifs && c.ifs_source.rfind("preset:", 0) == 0) {
    presets.push_back(c.ifs->name());
  } else {
    presets = {"cantor3", "cantor3x3", "sierpinski3", "interval2", "square2"};
  }
  const auto suites = run_selftest(presets, c.seed, scale);
  Outcome o;
  Json arr = Json::array();
  bool all = true;
  std::ostringstream csv;
  csv << "suite,cases,failures,worst,passed\n";
  for (const auto& s : suites) {
    arr.push_back({{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}, {"worst", s.worst},
                   {"passed", s.passed()}});
    csv << s.name << ',' << s.cases << ',' << s.failures << ',' << fmt(s.worst) << ',' << (s.passed() ? 1 : 0)
        << "\n";
    all = all && s.passed();
  }
  o.result = {{"presets", presets}, {"suites", arr}, {"passed", all}};
  o.csv = csv.str();
  if (!all) o.status = 1;
  return o;
}

Json budget_json(const RunConfig& c) {
  return Json{{"nodes", c.budget_nodes}, {"samples", c.budget_samples}};
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out_path.empty()) {
    out << content;
    out.flush();
  } else {
    write_atomic(c.out_path, content);
  }
}

void emit_error(const RunConfig* c, const Json& envelope, std::ostream& err) {
  err << dump(envelope);
  if (c && !c->out_path.empty()) {
    try {
      write_atomic(c->out_path, dump(envelope));
    } catch (...) {
    }
  }
}

IfsSystem load_ifs_file(const std::string& path) { return parse_ifs_json(read_file(path)); }

void set_preset(RunConfig& c, const std::string& name) {
  c.ifs = make_preset(name);
  c.ifs_source = "preset:" + name;
}

void set_ifs_file(RunConfig& c, const std::string& path) {
  c.ifs = load_ifs_file(path);
  c.ifs_source = "file:" + path;
}

long long positive_integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(ErrorCode::Validation, field + ": expected a positive integer");
  return j.get<long long>();
}

void check_format(const std::string& f) {
  if (!f.empty() && f != "csv" && f != "json")
    fail(ErrorCode::Validation, "output.format: expected csv or json, got '" + f + "'");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : commands()) v.push_back(c.name);
    return v;
  }();
  return names;
}

std::string data_dir() {
  if (const char* env = std::getenv("SINGLAB_DATA_DIR")) return env;
  return SINGLAB_DATA_DIR;
}

RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::Validation, std::string("malformed config document: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Validation, "config document must be an object");
  static const std::vector<std::string> keys = {"command", "ifs", "preset", "ifs_file", "seed", "threads",
                                                "deterministic", "budget", "output", "params"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      fail(ErrorCode::Validation, it.key() + ": unknown config key");

  RunConfig c;
  c.threads = default_threads();
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) fail(ErrorCode::Validation, "command: expected a string");
    c.command = doc["command"].get<std::string>();
    command_spec(c.command);
  }
  const int sources = doc.contains("ifs") + doc.contains("preset") + doc.contains("ifs_file");
  if (sources > 1) fail(ErrorCode::Validation, "give only one of ifs, preset, ifs_file");
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) fail(ErrorCode::Validation, "preset: expected a string");
    set_preset(c, doc["preset"].get<std::string>());
  } else if (doc.contains("ifs_file")) {
    if (!doc["ifs_file"].is_string()) fail(ErrorCode::Validation, "ifs_file: expected a string");
    set_ifs_file(c, doc["ifs_file"].get<std::string>());
  } else if (doc.contains("ifs")) {
    const Json& j = doc["ifs"];
    if (j.is_string()) {
      set_preset(c, j.get<std::string>());
    } else if (j.is_object() && j.contains("preset") && j.size() == 1) {
      if (!j["preset"].is_string()) fail(ErrorCode::Validation, "ifs.preset: expected a string");
      set_preset(c, j["preset"].get<std::string>());
    } else if (j.is_object() && j.contains("file") && j.size() == 1) {
      if (!j["file"].is_string()) fail(ErrorCode::Validation, "ifs.file: expected a string");
      set_ifs_file(c, j["file"].get<std::string>());
    } else {
      c.ifs = parse_ifs_json(j.dump());
      c.ifs_source = "inline";
    }
  }
  if (doc.contains("seed")) {
    const Json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      fail(ErrorCode::Validation, "seed: expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("threads")) c.threads = static_cast<int>(positive_integer(doc["threads"], "threads"));
  if (doc.contains("deterministic")) {
    if (!doc["deterministic"].is_boolean()) fail(ErrorCode::Validation, "deterministic: expected a boolean");
    c.deterministic = doc["deterministic"].get<bool>();
  }
  if (doc.contains("budget")) {
    const Json& b = doc["budget"];
    if (!b.is_object()) fail(ErrorCode::Validation, "budget: expected an object");
    for (auto it = b.begin(); it != b.end(); ++it)
      if (it.key() != "nodes" && it.key() != "samples") fail(ErrorCode::Validation, "budget." + it.key() + ": unknown key");
    if (b.contains("nodes")) c.budget_nodes = positive_integer(b["nodes"], "budget.nodes");
    if (b.contains("samples")) c.budget_samples = positive_integer(b["samples"], "budget.samples");
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    if (!o.is_object()) fail(ErrorCode::Validation, "output: expected an object");
    if (o.contains("path")) {
      if (!o["path"].is_string()) fail(ErrorCode::Validation, "output.path: expected a string");
      c.out_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) fail(ErrorCode::Validation, "output.format: expected a string");
      c.format = o["format"].get<std::string>();
      check_format(c.format);
    }
  }
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) fail(ErrorCode::Validation, "params: expected an object");
    c.params = doc["params"];
  }
  return c;
}

int run_and_emit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunConfig c = config;
  try {
    if (c.command.empty()) fail(ErrorCode::Validation, "command: missing");
    const CommandSpec& spec = command_spec(c.command);
    check_format(c.format);
    if (c.deterministic) c.threads = 1;
    if (c.threads < 1) fail(ErrorCode::Validation, "threads: must be positive");
    if (spec.needs_ifs && !c.ifs) fail(ErrorCode::Validation, "ifs: missing (use --preset or --ifs-file)");
    Params p(c.params, spec);

    Outcome o;
    if (c.command == "alpha") o = cmd_alpha(c, p);
    else if (c.command == "frostman") o = cmd_frostman(c, p);
    else if (c.command == "rotcocycle") o = cmd_rotcocycle(c, p);
    else if (c.command == "contraction") o = cmd_contraction(c, p);
    else if (c.command == "orbit") o = cmd_orbit(c, p);
    else if (c.command == "scan") o = cmd_scan(c, p);
    else if (c.command == "dimbound") o = cmd_dimbound(c, p);
    else o = cmd_selftest(c, p);

    std::string format = c.format;
    if (format.empty()) format = (c.command == "dimbound" && c.out_path.empty()) ? "text" : "json";
    if (format == "text") {
      out << o.text;
      out.flush();
    } else if (format == "csv") {
      std::ostringstream head;
      head << "# command: " << c.command << ", seed: " << c.seed << ", budget_nodes: " << c.budget_nodes
           << ", budget_samples: " << c.budget_samples << ", status: " << (o.status == 2 ? "partial" : "ok") << "\n";
      emit(c, head.str() + o.csv, out);
      if (!c.out_path.empty() && !o.text.empty()) out << o.text;
    } else {
      Json doc{{"command", c.command},
               {"seed", c.seed},
               {"budget", budget_json(c)},
               {"deterministic", c.deterministic},
               {"params", p.used()},
               {"result", o.result},
               {"status", o.status == 2 ? "partial" : (o.status == 1 ? "failed" : "ok")}};
      if (c.ifs) doc["ifs"] = to_json(*c.ifs);
      if (o.status == 2) doc["truncated"] = true;
      emit(c, dump(doc), out);
      if (!c.out_path.empty() && !o.text.empty()) out << o.text;
    }
    return o.status;
  } catch (const Error& e) {
    emit_error(&c, error_envelope(e), err);
    return 1;
  } catch (const std::exception& e) {
    emit_error(&c, error_envelope("internal", e.what()), err);
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"singlab: numerical experiments on self-similar fractals and lattice dynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, preset, ifs_file, seed, out_path, format;
  int threads = 0;
  bool deterministic = false;
  long long budget_nodes = 0, budget_samples = 0;
  app.add_option("--config", config_path, "JSON run document; flags override it");
  app.add_option("--preset", preset, "preset IFS name");
  app.add_option("--ifs-file", ifs_file, "IFS JSON file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads (default SINGLAB_THREADS or 1)");
  app.add_flag("--deterministic", deterministic, "single-threaded reproducible mode");
  app.add_option("--budget-nodes", budget_nodes, "node budget for tree searches");
  app.add_option("--budget-samples", budget_samples, "sample budget for Monte Carlo audits");
  app.add_option("--out", out_path, "output path (written atomically); default stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->fallthrough();
    auto& store = values[spec.name];
    for (const auto& ps : spec.params) sub->add_option("--" + dashed(ps.key), store[ps.key], ps.help);
    subs[spec.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << dump(error_envelope("invalid_input", e.what()));
    return 1;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) c = parse_config(read_file(config_path));
    else c.threads = default_threads();
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      c.command = name;
      for (const auto& ps : command_spec(name).params)
        if (sub->count("--" + dashed(ps.key)) > 0) c.params[ps.key] = flag_value(values[name][ps.key]);
    }
    if (!preset.empty() && !ifs_file.empty()) fail(ErrorCode::Validation, "give only one of --preset, --ifs-file");
    if (!preset.empty()) set_preset(c, preset);
    if (!ifs_file.empty()) set_ifs_file(c, ifs_file);
    if (!seed.empty()) {
      try {
        std::size_t pos = 0;
        if (seed.empty() || seed[0] == '-') throw std::invalid_argument("negative");
        c.seed = std::stoull(seed, &pos);
        if (pos != seed.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(ErrorCode::Validation, "seed: expected a non-negative integer");
      }
    }
    if (app.count("--threads")) {
      if (threads < 1) fail(ErrorCode::Validation, "threads: must be positive");
      c.threads = threads;
    }
    if (deterministic) c.deterministic = true;
    if (app.count("--budget-nodes")) {
      if (budget_nodes < 1) fail(ErrorCode::Validation, "budget.nodes: must be positive");
      c.budget_nodes = budget_nodes;
    }
    if (app.count("--budget-samples")) {
      if (budget_samples < 1) fail(ErrorCode::Validation, "budget.samples: must be positive");
      c.budget_samples = budget_samples;
    }
    if (!out_path.empty()) c.out_path = out_path;
    if (!format.empty()) c.format = format;
  } catch (const Error& e) {
    emit_error(nullptr, error_envelope(e), err);
    return 1;
  }
  return run_and_emit(c, out, err);
}

}  // namespace singlab
