#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "bellsplit/bell.hpp"
#include "bellsplit/campaign.hpp"
#include "bellsplit/decomp.hpp"
#include "bellsplit/errors.hpp"
#include "bellsplit/regions.hpp"
#include "bellsplit/state.hpp"

namespace bellsplit::cli {

namespace {

double number_field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidInput(where + " is missing '" + key + "'");
  if (!j[key].is_number()) throw InvalidInput(where + "." + key + " must be a number");
  return j[key].get<double>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : base / p;
}

Wavepacket parse_packet(const nlohmann::json& j, const std::filesystem::path& base, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + " must be an object");
  if (j.contains("gaussian") == j.contains("csv")) throw InvalidInput(where + " needs exactly one of 'gaussian', 'csv'");
  if (j.contains("gaussian")) {
    const auto& g = j["gaussian"];
    const std::string at = where + ".gaussian";
    const double delay = g.contains("delay") ? number_field(g, "delay", at) : 0.0;
    return Wavepacket::gaussian(number_field(g, "center", at), number_field(g, "width", at), delay);
  }
  if (!j["csv"].is_string()) throw InvalidInput(where + ".csv must be a path");
  return read_wavepacket_csv(resolve(base, j["csv"].get<std::string>())).packet;
}

// Overrides on top of the ladder selected by the environment.
Tolerances parse_tolerances(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("tolerances must be an object");
  Tolerances t = tolerances_from_environment();
  if (j.contains("profile")) {
    if (!j["profile"].is_string()) throw InvalidInput("tolerances.profile must be a string");
    t = tolerance_profile(j["profile"].get<std::string>());
  }
  for (auto [key, slot] : {std::pair{"construction", &t.construction}, std::pair{"identity", &t.identity},
                           std::pair{"oracle", &t.oracle}}) {
    if (!j.contains(key)) continue;
    const double v = number_field(j, key, "tolerances");
    if (!(v > 0.0)) throw InvalidInput(std::string("tolerances.") + key + " must be positive");
    *slot = v;
  }
  return t;
}

std::optional<std::pair<std::size_t, std::size_t>> parse_grid(const std::string& text) {
  static const std::regex pattern(R"((\d{1,6})x(\d{1,6}))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  return std::pair{static_cast<std::size_t>(std::stoul(m[1])), static_cast<std::size_t>(std::stoul(m[2]))};
}

// Writes to --out when given, else to the stream.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw InvalidInput("cannot open output file " + out_path);
  file << text;
}

}  // namespace

AnalysisConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  static const std::vector<std::string> known = {"scattering", "alpha_sq", "wavepackets", "window", "statistics",
                                                 "tolerances"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw InvalidInput("unknown config key '" + item.key() + "'");

  AnalysisConfig c;
  c.tolerances = tolerances_from_environment();
  if (j.contains("scattering")) {
    const auto& s = j["scattering"];
    if (!s.is_object() || s.contains("preset") == s.contains("file"))
      throw InvalidInput("scattering needs exactly one of 'preset', 'file'");
    if (s.contains("preset")) {
      if (!s["preset"].is_string()) throw InvalidInput("scattering.preset must be a string");
      c.scattering_label = s["preset"].get<std::string>();
      c.scattering = scattering_preset(*c.scattering_label);
    } else {
      if (!s["file"].is_string()) throw InvalidInput("scattering.file must be a path");
      const auto path = resolve(base, s["file"].get<std::string>());
      std::ifstream in(path);
      if (!in) throw InvalidInput("cannot open scattering file " + path.string());
      nlohmann::json m;
      try {
        in >> m;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("scattering file " + path.string() + ": " + e.what());
      }
      c.scattering_label = path.filename().string();
      try {
        c.scattering = make_scattering(matrix_from_json<4>(m));
      } catch (const NotUnitary& e) {
        throw InvalidInput(std::string("scattering file: ") + e.what());
      }
    }
  }

  if (j.contains("alpha_sq") && j.contains("wavepackets"))
    throw InvalidInput("config gives both 'alpha_sq' and 'wavepackets'; choose one alpha source");
  if (j.contains("alpha_sq")) {
    if (!j["alpha_sq"].is_number()) throw InvalidInput("alpha_sq must be a number");
    c.alpha_sq = j["alpha_sq"].get<double>();
    if (j.contains("window")) throw InvalidInput("'window' only applies to wavepackets");
  }
  if (j.contains("wavepackets")) {
    const auto& w = j["wavepackets"];
    if (!w.is_object() || !w.contains("psi") || !w.contains("phi"))
      throw InvalidInput("wavepackets needs 'psi' and 'phi'");
    WavepacketSource src{parse_packet(w["psi"], base, "wavepackets.psi"), parse_packet(w["phi"], base, "wavepackets.phi"),
                         std::nullopt};
    if (j.contains("window")) {
      const auto& win = j["window"];
      if (win.is_string()) {
        if (win.get<std::string>() != "infinite") throw InvalidInput("window must be \"infinite\" or {tau, t}");
      } else if (win.is_object()) {
        src.window = FiniteWindow{number_field(win, "tau", "window"), win.contains("t") ? number_field(win, "t", "window") : 0.0};
      } else {
        throw InvalidInput("window must be \"infinite\" or {tau, t}");
      }
    }
    c.wavepackets = std::move(src);
  }
  if (j.contains("statistics")) {
    if (!j["statistics"].is_string()) throw InvalidInput("statistics must be a string");
    c.statistics = statistics_from_string(j["statistics"].get<std::string>());
  }
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j["tolerances"]);
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

AnalysisResult analyze(const AnalysisConfig& config) {
  if (!config.scattering) throw InvalidInput("no scattering matrix given (use --preset or a config)");
  if (config.alpha_sq.has_value() == config.wavepackets.has_value())
    throw InvalidInput("exactly one alpha source is required (--alpha-sq, --delay, or config wavepackets)");
  const ScatteringMatrix& s = *config.scattering;
  const Tolerances& tol = config.tolerances;

  nlohmann::json report;
  report["version"] = std::string(version());
  report["tolerances"] = tol;
  report["statistics"] = std::string(to_string(config.statistics));
  if (config.scattering_label) report["scattering_source"] = *config.scattering_label;
  report["scattering"] = matrix_to_json(s.matrix());

  double a = 0.0;
  if (config.alpha_sq) {
    a = *config.alpha_sq;
    report["alpha_source"] = "direct";
  } else {
    const WavepacketSource& w = *config.wavepackets;
    const OverlapAlpha o = w.window ? alpha_finite_window(w.psi, w.phi, w.window->t, w.window->tau)
                                    : alpha_infinite_window(w.psi, w.phi);
    a = std::min(o.alpha_sq, 1.0);
    report["alpha_source"] = w.window ? "finite_window" : "infinite_window";
    report["alpha"] = {{"re", o.alpha.real()}, {"im", o.alpha.imag()}};
    if (w.window) report["window"] = {{"tau", w.window->tau}, {"t", w.window->t}};
  }
  report["alpha_sq"] = a;

  const HybridMatrix x = hybrid(s);
  report["gram"] = matrix_to_json(x.gram);

  const ConcurrenceReport conc = concurrence_report(s, a, config.statistics);
  const BellReport bell = emax(s, a, config.statistics, kDefaultChshBudget);
  report["concurrence"] = conc;
  report["bell"] = bell;
  report["region"] = std::string(to_string(classify(conc.c_closed, bell.emax_closed)));
  try {
    report["semi_polar"] = semi_polar(gammas(s, config.statistics));
  } catch (const DegenerateXi& e) {
    report["semi_polar"] = {{"format", "debug-v1"}, {"degenerate", e.what()}};
  }

  const double route_gap = conc.max_route_gap();
  const double bell_gap = std::abs(bell.emax_closed - bell.emax_horodecki);
  const double overshoot = bell.emax_bruteforce ? *bell.emax_bruteforce - bell.emax_horodecki : 0.0;
  AnalysisResult result;
  result.consistent = route_gap <= tol.oracle && bell_gap <= tol.oracle && overshoot <= 1e-6;
  report["consistency"] = {{"concurrence_route_gap", route_gap},
                           {"emax_route_gap", bell_gap},
                           {"bruteforce_overshoot", overshoot},
                           {"consistent", result.consistent}};
  result.report = std::move(report);
  return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement and Bell-CHSH violation of two photons at a polarizing beam splitter", "bellsplit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  std::string config_path, preset, statistics, out_path, grid = "200x200";
  std::optional<double> alpha_sq, tau, t_center, delay;
  std::uint64_t seed = 1;
  std::size_t count = 100;
  bool inject_fault = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one splitter and alpha source; prints JSON");
  analyze_cmd->add_option("--config", config_path, "Config JSON file");
  analyze_cmd->add_option("--preset", preset, "identity | balanced_pc | balanced_mixing(theta)");
  analyze_cmd->add_option("--alpha-sq", alpha_sq, "Direct |alpha|^2 in [0,1]");
  analyze_cmd->add_option("--delay", delay, "Relative delay of two unit-width Gaussian packets");
  analyze_cmd->add_option("--tau", tau, "Coincidence window width");
  analyze_cmd->add_option("--t", t_center, "Coincidence window centre");
  analyze_cmd->add_option("--statistics", statistics, "bosonic | fermionic");
  analyze_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* scan_cmd = app.add_subcommand("scan", "Classify the balanced slice; prints CSV");
  scan_cmd->add_option("--config", config_path, "Config JSON file (statistics only)");
  scan_cmd->add_option("--grid", grid, "AxB points in (alpha_sq, hv_sq)");
  scan_cmd->add_option("--statistics", statistics, "bosonic | fermionic");
  scan_cmd->add_option("--out", out_path, "Write the CSV here instead of stdout");

  auto* verify_cmd = app.add_subcommand("verify", "Run the random-matrix property campaign");
  verify_cmd->add_option("--config", config_path, "Config JSON file (tolerances only)");
  verify_cmd->add_option("--count", count, "Number of Haar-random splitters");
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--out", out_path, "Write the summary here instead of stdout");
  verify_cmd->add_flag("--inject-fault", inject_fault)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  AnalysisConfig config;
  try {
    if (!config_path.empty())
      config = load_config(config_path);
    else
      config.tolerances = tolerances_from_environment();
    if (!statistics.empty()) config.statistics = statistics_from_string(statistics);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (analyze_cmd->parsed()) {
      if (!preset.empty()) {
        config.scattering_label = preset;
        config.scattering = scattering_preset(preset);
      }
      if (alpha_sq && delay) throw InvalidInput("--alpha-sq and --delay are alternative alpha sources");
      if (alpha_sq && (tau || t_center)) throw InvalidInput("--tau/--t only apply to wavepacket alpha sources");
      if (alpha_sq) {
        config.alpha_sq = *alpha_sq;
        config.wavepackets.reset();
      }
      if (delay) {
        config.alpha_sq.reset();
        config.wavepackets = WavepacketSource{Wavepacket::gaussian(0.0, 1.0), Wavepacket::gaussian(0.0, 1.0, *delay),
                                              std::nullopt};
      }
      if (tau || t_center) {
        if (!config.wavepackets) throw InvalidInput("--tau/--t need a wavepacket alpha source");
        if (!tau) throw InvalidInput("--t needs --tau");
        config.wavepackets->window = FiniteWindow{*tau, t_center.value_or(0.0)};
      }
      AnalysisResult result;
      try {
        result = analyze(config);
      } catch (const InvalidInput& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
      }
      emit(result.report.dump(2) + "\n", out_path, out);
      if (!result.consistent) {
        err << "inconsistent: computational routes disagree beyond tolerance\n";
        return kInconsistent;
      }
      return kOk;
    }

    if (scan_cmd->parsed()) {
      const auto dims = parse_grid(grid);
      if (!dims || dims->first < 2 || dims->second < 2) {
        err << "bad --grid '" << grid << "': expected AxB with A, B >= 2\n";
        return kUsage;
      }
      ScanOptions opts;
      opts.alpha_points = dims->first;
      opts.hv_points = dims->second;
      opts.statistics = config.statistics;
      const ScanResult result = scan(opts);
      std::ostringstream csv;
      write_scan_csv(csv, result);
      emit(csv.str(), out_path, out);
      if (result.crossings_above_f > 0)
        err << "note: " << result.crossings_above_f << " E_max = 2 crossings found above the f boundary\n";
      return kOk;
    }

    if (verify_cmd->parsed()) {
      if (count == 0) {
        err << "--count must be at least 1\n";
        return kUsage;
      }
      VerifyOptions opts;
      opts.count = count;
      opts.seed = seed;
      opts.tolerances = config.tolerances;
      opts.inject_fault = inject_fault;
      const VerifyReport report = run_campaign(opts);
      std::ostringstream text;
      write_report(text, report);
      emit(text.str(), out_path, out);
      return report.passed() ? kOk : kInvariantFailure;
    }
  } catch (const ZeroCoincidence& e) {
    err << "no coincidences: " << e.what() << '\n';
    return kZeroCoincidence;
  } catch (const EmptyWindow& e) {
    err << "no coincidences: " << e.what() << '\n';
    return kZeroCoincidence;
  } catch (const InvalidInput& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInconsistent;
  }
  return kUsage;
}

}  // namespace bellsplit::cli
