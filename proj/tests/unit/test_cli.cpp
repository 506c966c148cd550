#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "blindrz/circuit_io.hpp"
#include "blindrz_cli/cli.hpp"

namespace cli = blindrz::cli;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(BLINDRZ_TEST_DATA) + "/" + name; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("blindrz_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CliLower, CxBecomesHadamardSandwich) {
  const auto r = invoke({"lower", data("cx.circ")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, "version 1\nqubits 2\nh 1\ncz 0 1\nh 1\n");
  EXPECT_NE(r.err.find("(ok)"), std::string::npos);
}

TEST(CliLower, EmptyCircuit) {
  const auto path = temp("empty_lowered.circ");
  const auto r = invoke({"lower", data("empty.circ"), "--out", path});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(slurp(path), "version 1\nqubits 1\n");
  std::filesystem::remove(path);
}

TEST(CliLower, MalformedFileGivesLineDiagnostic) {
  const auto r = invoke({"lower", data("malformed.circ")});
  EXPECT_EQ(r.code, cli::kParseError);
  EXPECT_NE(r.err.find("line 4:"), std::string::npos) << r.err;
}

TEST(CliLower, UnknownGate) {
  const auto r = invoke({"lower", data("unknown.circ")});
  EXPECT_EQ(r.code, cli::kUnsupportedGate);
  EXPECT_NE(r.err.find("sqrtx"), std::string::npos);
}

TEST(CliRun, DemoReport) {
  const auto r = invoke({"run", data("demo2.circ"), "--epsilon", "1e-2", "--seed", "7"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["format"], "blindrz-run");
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["M"], 9);
  EXPECT_GE(j["fidelity"]["vs_approximated"].get<double>(), 1 - 1e-6);
  EXPECT_GE(j["fidelity"]["vs_exact"].get<double>(), 1 - 1e-3);
  EXPECT_TRUE(j["rounds"]["law_holds"].get<bool>());
  EXPECT_EQ(j["transcript"]["digest"].get<std::string>().size(), 16u);
}

TEST(CliRun, ByteIdenticalReports) {
  const std::vector<std::string> args{"run", data("demo2.circ"), "--epsilon", "1e-2", "--seed", "7"};
  const auto a = invoke(args), b = invoke(args);
  EXPECT_EQ(a.out, b.out);
  auto threaded = args;
  threaded.push_back("--threaded");
  EXPECT_EQ(json::parse(invoke(threaded).out)["transcript"]["digest"], json::parse(a.out)["transcript"]["digest"]);
  auto other = args;
  other[5] = "8";
  EXPECT_NE(json::parse(invoke(other).out)["transcript"]["digest"], json::parse(a.out)["transcript"]["digest"]);
}

TEST(CliRun, WritesReportFile) {
  const auto path = temp("run.json");
  const auto r = invoke({"run", data("skeleton_a.circ"), "--out", path});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(path))["rounds"]["total"], 1 + 1 + 45);
  std::filesystem::remove(path);
}

TEST(CliRun, CapExceeded) { EXPECT_EQ(invoke({"run", data("wide.circ")}).code, cli::kCapExceeded); }

TEST(CliRun, StrictRejectsUnloweredInput) {
  EXPECT_EQ(invoke({"run", data("needs_lowering.circ"), "--strict"}).code, cli::kUnsupportedGate);
  EXPECT_EQ(invoke({"run", data("needs_lowering.circ")}).code, cli::kOk);
}

TEST(CliRun, BadFlags) {
  EXPECT_EQ(invoke({"run"}).code, cli::kParseError);
  EXPECT_EQ(invoke({"run", data("demo2.circ"), "--epsilon", "zero"}).code, cli::kParseError);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kParseError);
  EXPECT_EQ(invoke({"run", data("missing.circ")}).code, cli::kParseError);
  EXPECT_EQ(invoke({"--help"}).code, cli::kOk);
}

TEST(CliAudit, PaddedRunPasses) {
  const auto r = invoke({"audit", data("skeleton_a.circ"), "--epsilon", "0.4"});
  ASSERT_EQ(r.code, cli::kOk) << r.out << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["format"], "blindrz-audit");
  EXPECT_TRUE(j["pass"].get<bool>());
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
}

TEST(CliAudit, NegativeControlFails) {
  const auto r = invoke({"audit", data("plus.circ"), "--no-pads"});
  EXPECT_EQ(r.code, cli::kAuditFailed);
  const auto j = json::parse(r.out);
  for (const auto& c : j["checks"])
    if (c["name"] == "payload_mixedness") EXPECT_GE(c["value"].get<double>(), 0.4);
}

TEST(CliAudit, CompareSameSkeleton) {
  const auto r = invoke({"audit", data("skeleton_a.circ"), "--compare", data("skeleton_b.circ"), "--mode",
                         "sampled:64", "--epsilon", "0.4"});
  ASSERT_EQ(r.code, cli::kOk) << r.out;
  bool seen = false;
  const auto j = json::parse(r.out);
  for (const auto& c : j["checks"])
    if (c["name"] == "view_invariance") {
      seen = true;
      EXPECT_TRUE(c["pass"].get<bool>());
      EXPECT_EQ(c["detail"], "identical views");
    }
  EXPECT_TRUE(seen);
}

TEST(CliAudit, RejectsBadMode) {
  EXPECT_EQ(invoke({"audit", data("plus.circ"), "--mode", "sampled:0"}).code, cli::kParseError);
  EXPECT_EQ(invoke({"audit", data("plus.circ"), "--mode", "fast"}).code, cli::kParseError);
}

TEST(CliCost, DefaultGridShape) {
  const auto r = invoke({"cost"});
  ASSERT_EQ(r.code, cli::kOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epsilon,ratio,c_p,c_np,critical_ratio");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12u * 7u);
}

TEST(CliCost, CriticalRatioAtTenToMinusTen) {
  const auto r = invoke({"cost", "--epsilon", "1e-10", "--ratio", "0.5"});
  ASSERT_EQ(r.code, cli::kOk);
  const auto row = r.out.substr(r.out.find('\n') + 1);
  const double c = std::stod(row.substr(row.rfind(',') + 1));
  EXPECT_NEAR(c, 0.005, 0.001);
}

TEST(CliCost, SingularEpsilonSkippedWithWarning) {
  const auto r = invoke({"cost", "--epsilon", "0.36787944117144233", "--epsilon", "0.01", "--ratio", "0.5"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST(CliCost, MeasuredRoundLaw) {
  const auto r = invoke({"cost", "--epsilon", "0.01", "--ratio", "1", "--round-law", "measured"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find(",45000,"), std::string::npos) << r.out;
  EXPECT_EQ(invoke({"cost", "--round-law", "guess"}).code, cli::kParseError);
  EXPECT_EQ(invoke({"cost", "--epsilon", "2"}).code, cli::kParseError);
}
