#pragma once

#include <string>

#include "json.hpp"
#include "singlab/diophantine.hpp"
#include "singlab/dynamics.hpp"
#include "singlab/exponents.hpp"
#include "singlab/exterior.hpp"
#include "singlab/ifs.hpp"
#include "singlab/transversality.hpp"

namespace singlab {

using Json = nlohmann::json;

Json to_json(const IfsSystem& ifs);
Json to_json(const Vec& v);
Json to_json(const Mat& m);  // row-major nested arrays
Json to_json(const ScalingFit& fit);
Json to_json(const RotationCocycleResult& r);
Json to_json(const DimensionBound& b);
Json to_json(const HeightParams& p);
Json to_json(const PhiResult& r);
Json to_json(const IsolationReport& r);
Json to_json(const ContainmentReport& r);
Json to_json(const ExpansionReport& r);
Json to_json(const OrbitTrace& t);
Json to_json(const ContractionReport& r);
Json to_json(const DimensionEstimate& e);
Json to_json(const ImprovabilityProfile& p);
Json to_json(const ScanReport& r, bool include_rows);
Json to_json(const DaniReport& r);
Json error_envelope(const Error& e);
Json error_envelope(const std::string& code, const std::string& message);

// Deterministic serialization: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

std::string orbit_csv(const OrbitTrace& t);
std::string scan_csv(const ScanReport& r);
std::string word_string(const Word& w);

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace singlab
