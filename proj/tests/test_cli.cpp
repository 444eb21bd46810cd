#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "singlab/cli.hpp"

using namespace singlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int rc = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "singlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "singlab_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(ParseConfig, PresetDocument) {
  const auto c = parse_config(R"({"command": "dimbound", "ifs": "cantor3x3", "seed": 7,
                                  "params": {"alphas": "from-file"}})");
  EXPECT_EQ(c.command, "dimbound");
  ASSERT_TRUE(c.ifs.has_value());
  EXPECT_EQ(c.ifs->dim(), 2);
  EXPECT_EQ(c.ifs->size(), 4);
  EXPECT_EQ(c.seed, 7u);
}

TEST(ParseConfig, InlineIfsValidation) {
  const std::string bad_ratio = R"({"command": "alpha", "ifs": {"dim": 1, "maps": [
      {"ratio": 1.2, "translation": [0]}]}})";
  try {
    parse_config(bad_ratio);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("maps[0].ratio"), std::string::npos) << e.what();
  }
  const std::string reflection = R"({"command": "alpha", "ifs": {"dim": 2, "maps": [
      {"ratio": "1/3", "rotation": [1, 0, 0, -1], "translation": [0, 0]}]}})";
  EXPECT_THROW(parse_config(reflection), Error);
}

TEST(ParseConfig, RejectsUnknownKeysAndCommands) {
  EXPECT_THROW(parse_config(R"({"command": "alpha", "ifs": "cantor3", "colour": 1})"), Error);
  EXPECT_THROW(parse_config(R"({"command": "fly", "ifs": "cantor3"})"), Error);
  EXPECT_THROW(parse_config("{not json"), Error);
}

TEST(RunAndEmit, DimboundFromConfig) {
  auto c = parse_config(R"({"command": "dimbound", "ifs": "cantor3x3", "params": {"alphas": "from-file"},
                            "output": {"format": "json"}})");
  std::ostringstream out, err;
  EXPECT_EQ(run_and_emit(c, out, err), 0) << err.str();
  const Json j = Json::parse(out.str());
  EXPECT_EQ(j["command"], "dimbound");
  EXPECT_EQ(j["status"], "ok");
  EXPECT_NEAR(j["result"]["bound"].get<double>(), 4 * std::log(2.0) / (3 * std::log(3.0)), 1e-12);
}

TEST(Cli, DimboundTextOutput) {
  const auto r = run({"dimbound", "--preset", "cantor3x3", "--alphas", "from-file"});
  EXPECT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(r.out, "0.841239671429\n");
}

TEST(Cli, UnknownPresetListsNames) {
  const auto r = run({"alpha", "--preset", "nope"});
  EXPECT_EQ(r.rc, 1);
  const Json j = Json::parse(r.err);
  const std::string msg = j["error"]["message"];
  for (const auto& name : preset_names()) EXPECT_NE(msg.find(name), std::string::npos) << name;
}

TEST(Cli, InvalidParameterGivesEnvelope) {
  const auto r = run({"contraction", "--preset", "cantor3x3", "--eps", "1.5"});
  EXPECT_EQ(r.rc, 1);
  const Json j = Json::parse(r.err);
  EXPECT_TRUE(j["error"].contains("code"));
  EXPECT_TRUE(j["error"].contains("message"));
}

TEST(Cli, DeterministicOutputIsByteIdentical) {
  const auto a = scratch("orbit_a.json"), b = scratch("orbit_b.json");
  const std::vector<std::string> base = {"orbit", "--preset", "cantor3x3", "--alphas", "from-file", "--epochs",
                                         "4", "--deterministic", "--seed", "5", "--format", "json", "--out"};
  auto args = base;
  args.push_back(a.string());
  ASSERT_EQ(run(args).rc, 0);
  args = base;
  args.push_back(b.string());
  args.push_back("--threads");
  args.push_back("4");
  ASSERT_EQ(run(args).rc, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST(Cli, StarvedScanIsPartial) {
  const auto p = scratch("scan_partial.csv");
  const auto r = run({"scan", "--preset", "cantor3x3", "--depth", "4", "--budget-nodes", "20", "--format", "csv",
                      "--out", p.string()});
  EXPECT_EQ(r.rc, 2) << r.err;
  const std::string body = slurp(p);
  EXPECT_NE(body.find("# truncated: true"), std::string::npos);
}

TEST(Cli, SelftestPasses) {
  const auto r = run({"selftest", "--format", "json", "--scale", "0.2"});
  EXPECT_EQ(r.rc, 0) << r.out << r.err;
}

TEST(Cli, AlphaReportRoundTripsIntoDimbound) {
  const auto p = scratch("alpha_report.json");
  const auto a = run({"alpha", "--preset", "cantor3", "--ell", "1", "--eps-first", "0.012345679", "--eps-count",
                      "4", "--format", "json", "--out", p.string()});
  ASSERT_EQ(a.rc, 0) << a.err;
  const auto b = run({"dimbound", "--preset", "cantor3", "--alphas-file", p.string(), "--format", "json"});
  ASSERT_EQ(b.rc, 0) << b.err;
  const Json j = Json::parse(b.out);
  EXPECT_GT(j["result"]["bound"].get<double>(), 0.0);
  EXPECT_LT(j["result"]["bound"].get<double>(), std::log(2.0) / std::log(3.0));
}
