#include <cmath>

#include "json.hpp"
#include "singlab/ifs.hpp"

namespace singlab {

using nlohmann::json;

namespace {

struct Num {
  double value;
  Rational exact;
};

double rational_to_double(const Rational& r) {
  using boost::multiprecision::cpp_int;
  const cpp_int n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
  const cpp_int lim = cpp_int(1) << 53;
  if (boost::multiprecision::abs(n) <= lim && d <= lim) return n.convert_to<double>() / d.convert_to<double>();
  return r.convert_to<double>();
}

Num number(const json& j, const std::string& path) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ErrorCode::Validation, path + ": non-finite number");
    return Num{v, Rational(v)};
  }
  if (j.is_string()) {
    Rational r;
    try {
      r = parse_rational(j.get<std::string>());
    } catch (const Error&) {
      fail(ErrorCode::Validation, path + ": not a number or rational literal");
    }
    return Num{rational_to_double(r), r};
  }
  fail(ErrorCode::Validation, path + ": expected a number");
}

std::vector<Num> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(ErrorCode::Validation, path + ": expected an array");
  std::vector<Num> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_array()) {
      for (const auto& v : numbers(j[i], path + "[" + std::to_string(i) + "]")) out.push_back(v);
    } else {
      out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    }
  }
  return out;
}

}  // namespace

IfsSystem parse_ifs_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Validation, std::string("malformed IFS document: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Validation, "IFS document must be an object");
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) fail(ErrorCode::Validation, "preset: expected a string");
    return make_preset(doc["preset"].get<std::string>());
  }
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1)
    fail(ErrorCode::Validation, "dim: expected a positive integer");
  const int d = doc["dim"].get<int>();
  if (!doc.contains("maps") || !doc["maps"].is_array() || doc["maps"].empty())
    fail(ErrorCode::Validation, "maps: expected a non-empty array");

  std::vector<SimilarityMap> maps;
  std::vector<ExactMap> exact;
  bool exact_ok = true;
  for (std::size_t i = 0; i < doc["maps"].size(); ++i) {
    const json& m = doc["maps"][i];
    const std::string p = "maps[" + std::to_string(i) + "]";
    if (!m.is_object()) fail(ErrorCode::Validation, p + ": expected an object");
    if (!m.contains("ratio")) fail(ErrorCode::Validation, p + ".ratio: missing");
    const Num ratio = number(m["ratio"], p + ".ratio");
    if (!(ratio.value > 0.0 && ratio.value < 1.0))
      fail(ErrorCode::Validation, p + ".ratio: must lie in (0,1)");

    Mat rot = Mat::Identity(d, d);
    std::vector<int> erot(d * d, 0);
    for (int k = 0; k < d; ++k) erot[k * d + k] = 1;
    if (m.contains("rotation") && m.contains("rotation_deg"))
      fail(ErrorCode::Validation, p + ": give rotation or rotation_deg, not both");
    if (m.contains("rotation")) {
      const auto r = numbers(m["rotation"], p + ".rotation");
      if (static_cast<int>(r.size()) != d * d)
        fail(ErrorCode::Validation, p + ".rotation: expected " + std::to_string(d * d) + " entries");
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          rot(a, b) = r[a * d + b].value;
          const double v = r[a * d + b].value;
          if (v == 1.0 || v == -1.0 || v == 0.0) erot[a * d + b] = static_cast<int>(v);
          else exact_ok = false;
        }
    } else if (m.contains("rotation_deg")) {
      if (d != 2) fail(ErrorCode::Validation, p + ".rotation_deg: only valid for dim 2");
      rot = rotation_from_degrees(number(m["rotation_deg"], p + ".rotation_deg").value);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double v = rot(a, b);
          if (v == 1.0 || v == -1.0 || v == 0.0) erot[a * 2 + b] = static_cast<int>(v);
          else exact_ok = false;
        }
    }
    if ((rot.transpose() * rot - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
      fail(ErrorCode::Validation, p + ".rotation: not orthogonal");
    if (std::abs(rot.determinant() - 1.0) > 1e-10)
      fail(ErrorCode::Validation, p + ".rotation: orientation invariant violated (det must be +1)");

    if (!m.contains("translation")) fail(ErrorCode::Validation, p + ".translation: missing");
    const auto t = numbers(m["translation"], p + ".translation");
    if (static_cast<int>(t.size()) != d)
      fail(ErrorCode::Validation, p + ".translation: expected " + std::to_string(d) + " entries");
    Vec tv(d);
    std::vector<Rational> et;
    for (int k = 0; k < d; ++k) {
      tv[k] = t[k].value;
      et.push_back(t[k].exact);
    }
    maps.push_back(SimilarityMap{ratio.value, rot, tv});
    exact.push_back(ExactMap{ratio.exact, erot, et});
  }

  std::optional<Box> osc;
  if (doc.contains("osc_box")) {
    const json& b = doc["osc_box"];
    if (!b.is_object() || !b.contains("lo") || !b.contains("hi"))
      fail(ErrorCode::Validation, "osc_box: expected {lo, hi}");
    const auto lo = numbers(b["lo"], "osc_box.lo"), hi = numbers(b["hi"], "osc_box.hi");
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
      fail(ErrorCode::Validation, "osc_box: corners must have dim entries");
    Box box{Vec(d), Vec(d)};
    for (int k = 0; k < d; ++k) {
      box.lo[k] = lo[k].value;
      box.hi[k] = hi[k].value;
      if (!(box.lo[k] < box.hi[k])) fail(ErrorCode::Validation, "osc_box: lo must be below hi");
    }
    osc = box;
  }
  const std::string name = doc.value("name", std::string("custom"));
  try {
    if (exact_ok && osc) return IfsSystem::create(std::move(maps), osc, std::move(exact), name);
    return IfsSystem::create(std::move(maps), osc, std::nullopt, name);
  } catch (const Error& e) {
    fail(ErrorCode::Validation, e.what());
  }
}

}  // namespace singlab
