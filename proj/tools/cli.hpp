#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bellsplit/scattering.hpp"
#include "bellsplit/tolerance.hpp"
#include "bellsplit/wavepacket.hpp"

namespace bellsplit::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantFailure = 1,
  kUsage = 2,
  kZeroCoincidence = 3,
  kInconsistent = 4,
};

struct FiniteWindow {
  double tau = 0.0;
  double t = 0.0;
};

struct WavepacketSource {
  Wavepacket psi;
  Wavepacket phi;
  std::optional<FiniteWindow> window;  ///< empty = infinite window
};

struct AnalysisConfig {
  std::optional<ScatteringMatrix> scattering;
  std::optional<std::string> scattering_label;
  std::optional<double> alpha_sq;
  std::optional<WavepacketSource> wavepackets;
  Statistics statistics = Statistics::bosonic;
  Tolerances tolerances = kDefaultTolerances;
};

/// Parses a config document; relative file paths resolve against `base`.
/// Every referenced file is read here. Throws InvalidInput on any problem.
AnalysisConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base);
AnalysisConfig load_config(const std::filesystem::path& path);

struct AnalysisResult {
  nlohmann::json report;
  bool consistent = true;  ///< all computational routes agree within tolerance
};

/// Analysis of one configuration; throws ZeroCoincidence and friends.
AnalysisResult analyze(const AnalysisConfig& config);

/// Runs the command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellsplit::cli
