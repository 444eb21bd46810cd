#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace singlab {

struct SuiteResult {
  std::string name;
  long long cases = 0;
  long long failures = 0;
  double worst = 0.0;  // largest normalized error seen
  bool passed() const { return failures == 0 && cases > 0; }
};

// Quick invariant suites over the named presets; `scale` multiplies case counts.
std::vector<SuiteResult> run_selftest(const std::vector<std::string>& presets, std::uint64_t seed, double scale = 1.0);

}  // namespace singlab
