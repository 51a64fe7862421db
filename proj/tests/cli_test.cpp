#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bellsplit/errors.hpp"
#include "cli.hpp"

using namespace bellsplit;
namespace fs = std::filesystem;

namespace {

const fs::path kData = BELLSPLIT_TEST_DATA;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json analyze_json(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"analyze"};
  full.insert(full.end(), args.begin(), args.end());
  const Outcome o = run_cli(full);
  EXPECT_EQ(o.code, cli::kOk) << o.err;
  return nlohmann::json::parse(o.out);
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("bellsplit_cli_test_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Analyze, PresetWithDirectAlpha) {
  const nlohmann::json j = analyze_json({"--preset", "balanced_pc", "--alpha-sq", "1"});
  EXPECT_EQ(j["alpha_source"], "direct");
  EXPECT_EQ(j["scattering_source"], "balanced_pc");
  EXPECT_NEAR(j["concurrence"]["closed"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["bell"]["emax_closed"].get<double>(), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(j["bell"]["emax_bruteforce"].is_null());
  EXPECT_EQ(j["region"], "violating");
  EXPECT_TRUE(j["consistency"]["consistent"].get<bool>());
  EXPECT_TRUE(j["semi_polar"].contains("degenerate"));
  EXPECT_EQ(j["version"], std::string(version()));
}

TEST(Analyze, DelayedGaussiansGiveGaussianOverlap) {
  const nlohmann::json j = analyze_json({"--preset", "balanced_pc", "--delay", "1"});
  EXPECT_EQ(j["alpha_source"], "infinite_window");
  EXPECT_NEAR(j["alpha_sq"].get<double>(), std::exp(-1.0), 1e-10);
  const nlohmann::json w = analyze_json({"--preset", "balanced_pc", "--delay", "1", "--tau", "0.001", "--t", "0.5"});
  EXPECT_EQ(w["alpha_source"], "finite_window");
  EXPECT_NEAR(w["alpha_sq"].get<double>(), 1.0, 1e-4);
  EXPECT_EQ(w["window"]["tau"], 0.001);
}

TEST(Analyze, ConfigWithFilesResolvesRelativePaths) {
  const nlohmann::json j = analyze_json({"--config", (kData / "tabulated_infinite.json").string()});
  EXPECT_EQ(j["scattering_source"], "rotated_splitter.json");
  EXPECT_EQ(j["alpha_source"], "infinite_window");
  // 401-point linear interpolant of the reference packet.
  EXPECT_NEAR(j["alpha_sq"].get<double>(), std::exp(-0.25), 1e-4);
  EXPECT_EQ(j["tolerances"]["oracle"], 1e-6);
  // Diagonal Gram (cos^2 0.5, sin^2 0.5): non-degenerate semi-polar data.
  EXPECT_NEAR(j["gram"]["re"][0].get<double>(), std::pow(std::cos(0.5), 2), 1e-12);
  EXPECT_TRUE(j["semi_polar"].contains("c1"));
  EXPECT_TRUE(j["consistency"]["consistent"].get<bool>());
}

TEST(Analyze, ConfigStatisticsAndCommandLineOverride) {
  const fs::path cfg = kData / "fermionic_direct.json";
  EXPECT_EQ(analyze_json({"--config", cfg.string()})["statistics"], "fermionic");
  const nlohmann::json j = analyze_json({"--config", cfg.string(), "--statistics", "bosonic", "--alpha-sq", "0.1"});
  EXPECT_EQ(j["statistics"], "bosonic");
  EXPECT_EQ(j["alpha_sq"], 0.1);
}

TEST(Analyze, WritesToOutFile) {
  const fs::path out = temp_file("analyze.json");
  const Outcome o = run_cli({"analyze", "--preset", "identity", "--alpha-sq", "0.5", "--out", out.string()});
  EXPECT_EQ(o.code, cli::kOk);
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(nlohmann::json::parse(slurp(out))["region"], "unentangled");
  fs::remove(out);
}

TEST(Analyze, ExitCodesForBadInput) {
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--alpha-sq", "0.5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--preset", "mirror", "--alpha-sq", "0.5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc", "--alpha-sq", "1.5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc", "--alpha-sq", "0.5", "--delay", "1"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc", "--alpha-sq", "0.5", "--tau", "1"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc", "--delay", "1", "--t", "1"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc", "--alpha-sq", "0.5", "--statistics", "anyonic"}).code,
            cli::kUsage);
  EXPECT_EQ(run_cli({"analyze", "--config", (kData / "missing.json").string()}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
}

TEST(Analyze, VanishingCoincidencesExitThree) {
  const Outcome o = run_cli({"analyze", "--preset", "balanced_mixing(1.5707963267948966)", "--alpha-sq", "1"});
  EXPECT_EQ(o.code, cli::kZeroCoincidence);
  EXPECT_NE(o.err.find("no coincidences"), std::string::npos);
  EXPECT_EQ(run_cli({"analyze", "--preset", "balanced_pc", "--delay", "0", "--tau", "0.01", "--t", "500"}).code,
            cli::kZeroCoincidence);
}

TEST(Config, RejectsMalformedDocuments) {
  const fs::path base = kData;
  auto bad = [&](const char* text) { return nlohmann::json::parse(text); };
  EXPECT_THROW(cli::parse_config(bad(R"([1, 2])"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"colour": "red"})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"scattering": {}})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"scattering": {"preset": "identity", "file": "x"}})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"scattering": {"file": "nonunitary.json"}})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"scattering": {"file": "absent.json"}})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"alpha_sq": "half"})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"alpha_sq": 0.5, "window": "infinite"})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"wavepackets": {"psi": {"gaussian": {"center": 0}}}})"), base),
               InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"wavepackets": {"psi": {"gaussian": {"center": 0, "width": 1}},
                                                          "phi": {"gaussian": {"center": 0}}}})"),
                                 base),
               InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"wavepackets": {"psi": {"csv": "nope.csv"},
                                                          "phi": {"csv": "nope.csv"}}})"),
                                 base),
               InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"tolerances": {"oracle": -1}})"), base), InvalidInput);
  EXPECT_THROW(cli::parse_config(bad(R"({"tolerances": {"profile": "lax"}})"), base), InvalidInput);
}

TEST(Config, ParsesWindowsAndTolerances) {
  const cli::AnalysisConfig c = cli::parse_config(
      nlohmann::json::parse(R"({"scattering": {"preset": "identity"},
                                "wavepackets": {"psi": {"gaussian": {"center": 1, "width": 2}},
                                                "phi": {"csv": "gaussian_packet.csv"}},
                                "window": {"tau": 3, "t": -1},
                                "tolerances": {"profile": "strict", "identity": 1e-9}})"),
      kData);
  ASSERT_TRUE(c.wavepackets.has_value());
  ASSERT_TRUE(c.wavepackets->window.has_value());
  EXPECT_EQ(c.wavepackets->window->tau, 3.0);
  EXPECT_EQ(c.wavepackets->window->t, -1.0);
  EXPECT_EQ(c.tolerances.construction, kStrictTolerances.construction);
  EXPECT_EQ(c.tolerances.identity, 1e-9);
  EXPECT_EQ(c.scattering_label, "identity");
  EXPECT_FALSE(c.alpha_sq.has_value());
}

TEST(Scan, WritesTheRequestedGrid) {
  const Outcome o = run_cli({"scan", "--grid", "4x3"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  std::istringstream lines(o.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 13);
  EXPECT_EQ(o.out.rfind("alpha_sq,hv_sq,concurrence,emax,branch,region\n", 0), 0u);
  EXPECT_EQ(run_cli({"scan", "--grid", "1x5"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"scan", "--grid", "5by5"}).code, cli::kUsage);
  EXPECT_NE(run_cli({"scan", "--grid", "4x3", "--statistics", "fermionic"}).out, o.out);
}

TEST(Scan, OutputIsByteIdenticalAcrossRuns) {
  const fs::path a = temp_file("scan_a.csv"), b = temp_file("scan_b.csv");
  ASSERT_EQ(run_cli({"scan", "--grid", "60x50", "--out", a.string()}).code, cli::kOk);
  ASSERT_EQ(run_cli({"scan", "--grid", "60x50", "--out", b.string()}).code, cli::kOk);
  const std::string first = slurp(a);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(b));
  fs::remove(a);
  fs::remove(b);
}

TEST(Verify, PassesAndIsDeterministicPerSeed) {
  const Outcome a = run_cli({"verify", "--count", "10", "--seed", "7"});
  const Outcome b = run_cli({"verify", "--count", "10", "--seed", "7"});
  const Outcome c = run_cli({"verify", "--count", "10", "--seed", "8"});
  EXPECT_EQ(a.code, cli::kOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_NE(a.out.find("result PASS"), std::string::npos);
}

TEST(Verify, FaultInjectionAndBadCount) {
  const Outcome f = run_cli({"verify", "--count", "3", "--inject-fault"});
  EXPECT_EQ(f.code, cli::kInvariantFailure);
  EXPECT_NE(f.out.find("result FAIL"), std::string::npos);
  EXPECT_EQ(run_cli({"verify", "--count", "0"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"verify", "--count", "-2"}).code, cli::kUsage);
}

TEST(Help, ExitsCleanly) {
  const Outcome o = run_cli({"--help"});
  EXPECT_EQ(o.code, cli::kOk);
  EXPECT_NE(o.out.find("analyze"), std::string::npos);
}
