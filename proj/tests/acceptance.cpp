// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bellsplit/bell.hpp"
#include "bellsplit/decomp.hpp"
#include "bellsplit/errors.hpp"
#include "bellsplit/regions.hpp"
#include "bellsplit/scattering.hpp"
#include "bellsplit/state.hpp"
#include "bellsplit/wavepacket.hpp"
#include "cli.hpp"
#include "support.hpp"

using namespace bellsplit;
using testing_support::Gen;
using testing_support::kAlphaLadder;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Tracks the worst deviation against a limit.
struct Worst {
  double value = 0.0;
  void add(double d) { value = std::max(value, std::isnan(d) ? INFINITY : d); }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::array<double, 3> descending(std::array<double, 3> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

std::vector<ScatteringMatrix> ensemble(std::uint64_t seed, int count) {
  Gen gen(seed);
  std::vector<ScatteringMatrix> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(gen.splitter());
  return out;
}

Outcome concurrence_oracles() {
  Worst wootters, gamma;
  for (const ScatteringMatrix& s : ensemble(1, 1000)) {
    const GammaPair g = gammas(s);
    for (double a : kAlphaLadder) {
      const double c = concurrence_closed(hybrid(s), a);
      wootters.add(std::abs(c - concurrence_wootters(build_rho(g, a))));
      const double n = (1 + a) * inner(g.gamma1, g.gamma1).real() + (1 - a) * inner(g.gamma2, g.gamma2).real();
      gamma.add(std::abs(c - 2.0 * a * std::abs(inner(g.gamma1, tilde(g.gamma1))) / n));
    }
  }
  return {wootters.value <= 1e-8 && gamma.value <= 1e-10,
          fmt("max |closed-wootters| %.2e (<=1e-8), max |closed-gamma| %.2e (<=1e-10)", wootters.value, gamma.value)};
}

Outcome bell_spectrum() {
  Worst gap;
  for (const ScatteringMatrix& s : ensemble(2, 1000)) {
    const GammaPair g = gammas(s);
    const SemiPolar sp = semi_polar(g);
    for (double a : kAlphaLadder) {
      const UEigen ue = u_eigen_closed(hybrid(s), a);
      const auto closed = descending({ue.u1, ue.u2, ue.u3});
      const PolarizationState st = build_rho(g, a);
      const auto direct = rtr_spectrum(correlation_matrix(st.rho));
      const auto reduced = rtr_spectrum(r_prime(sp, a, st.normalization).matrix());
      for (int i = 0; i < 3; ++i) {
        gap.add(std::abs(closed[i] - direct[i]));
        gap.add(std::abs(reduced[i] - direct[i]));
      }
    }
  }
  return {gap.value <= 1e-8, fmt("max multiset gap %.2e (<=1e-8)", gap.value)};
}

Outcome chsh_vs_horodecki() {
  double worst_below = 0.0, worst_above = -INFINITY;
  const auto splitters = ensemble(3, 100);
  for (std::size_t k = 0; k < splitters.size(); ++k) {
    const CMat4 rho = build_rho(gammas(splitters[k]), kAlphaLadder[k % 5]).rho;
    const double bound = emax_horodecki(rho);
    const double found = chsh_bruteforce(rho).value;
    worst_below = std::max(worst_below, bound - found);
    worst_above = std::max(worst_above, found - bound);
  }
  return {worst_below <= 1e-4 && worst_above <= 1e-6,
          fmt("max shortfall %.2e (<=1e-4), max overshoot %.2e (<=1e-6)", worst_below, worst_above)};
}

Outcome gisin() {
  Worst gap;
  for (const ScatteringMatrix& s : ensemble(4, 200)) {
    const double c = concurrence_closed(hybrid(s), 1.0);
    const BellReport r = emax(s, 1.0);
    gap.add(std::abs(r.emax_closed - 2.0 * std::sqrt(1.0 + c * c)));
    gap.add(std::abs(r.emax_horodecki - 2.0 * std::sqrt(1.0 + c * c)));
  }
  return {gap.value <= 1e-8, fmt("max |emax - 2 sqrt(1+C^2)| %.2e (<=1e-8)", gap.value)};
}

Outcome balanced_slice() {
  ScanOptions opt;
  opt.alpha_points = 200;
  opt.hv_points = 200;
  const ScanResult r = scan(opt);
  Worst edge, on_g;
  std::size_t sign_mismatch = 0, witnesses = 0;
  for (const ScanRow& row : r.rows) {
    if (!row.report) continue;
    if (row.hv_sq == 0.25 || row.alpha_sq == 0.0) edge.add(std::abs(row.report->concurrence));
    const double g = g_boundary(row.alpha_sq);
    if (std::abs(row.hv_sq - g) > 1e-8) {
      const double e = row.report->emax - 2.0;
      if ((e > 0.0) != (g - row.hv_sq > 0.0)) ++sign_mismatch;
    }
    if (row.report->concurrence >= 0.05 && row.report->emax <= 1.99) ++witnesses;
  }
  // Points on g, both from the slice formula and a realized splitter.
  for (std::size_t i = 1; i + 1 < opt.alpha_points; i += 7) {
    const double a = static_cast<double>(i) / static_cast<double>(opt.alpha_points - 1);
    const BalancedPoint p = balanced_point(a, g_boundary(a));
    on_g.add(std::abs(balanced_emax(p).emax - 2.0));
    on_g.add(std::abs(emax(realize_gram(balanced_gram(p)), a).emax_horodecki - 2.0));
  }
  const bool ok = edge.value <= 1e-10 && on_g.value <= 1e-8 && sign_mismatch == 0 && witnesses > 0;
  std::ostringstream d;
  d << fmt("edge C %.2e (<=1e-10), |emax-2| on g %.2e (<=1e-8), ", edge.value, on_g.value) << "sign mismatches "
    << sign_mismatch << ", entangled-nonviolating cells " << witnesses;
  return {ok, d.str()};
}

Outcome trace_identities_suite() {
  Worst defect;
  for (const ScatteringMatrix& s : ensemble(6, 1000)) defect.add(trace_identities(s).max_defect());
  return {defect.value <= 1e-10, fmt("max gamma-side vs gram-side defect %.2e (<=1e-10)", defect.value)};
}

Outcome round_trips() {
  Gen gen(7);
  Worst polar, semi, constraints, canonical;
  int polar_checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const ScatteringMatrix s = gen.splitter();
    try {
      polar.add(max_abs_diff(polar_decompose_s(s).reassemble(), s.matrix()));
      ++polar_checked;
    } catch (const DegenerateTransmission&) {
    }
    const GammaPair g = gammas(s);
    const SemiPolar sp = semi_polar(g);
    semi.add(max_abs_diff(sp.gamma1(), g.gamma1));
    semi.add(max_abs_diff(sp.gamma2(), g.gamma2));
    constraints.add(sp.q_imag_defect);
    constraints.add(std::abs(sp.c1 * sp.c1 + sp.c2 * sp.c3 - 1.0));
    const double norm1 = sp.c1 * sp.c1 * (sp.xi[0] + sp.xi[1]) + sp.c2 * sp.c2 * sp.xi[1] + sp.c3 * sp.c3 * sp.xi[0];
    constraints.add(std::abs(norm1 - inner(g.gamma1, g.gamma1).real()));
    const CMat2 sigma = gen.rank_one();
    const CanonicalInput c = canonicalize_input(s, sigma);
    canonical.add(max_abs_diff(c.scale * outgoing_matrix(c.scattering, sigma_in()), outgoing_matrix(s, sigma)) /
                  (1.0 + max_abs(sigma)));
  }
  const bool ok = polar_checked > 900 && polar.value <= 1e-10 && semi.value <= 1e-10 && constraints.value <= 1e-10 &&
                  canonical.value <= 1e-10;
  return {ok, fmt("polar %.2e, semi-polar %.2e, constraints %.2e", polar.value, semi.value, constraints.value) +
                  fmt(", canonical input %.2e (all <=1e-10)", canonical.value)};
}

Outcome wavepacket_limits() {
  const Wavepacket p = Wavepacket::gaussian(0.3, 1.2);
  const double identical = std::abs(alpha_infinite_window(p, p).alpha_sq - 1.0);
  // Narrow centred window on a delayed pair.
  const Wavepacket q = Wavepacket::gaussian(0.3, 1.2, 0.8);
  const double narrow = std::abs(alpha_finite_window(p, q, 0.4, 1e-3).alpha_sq - 1.0);
  const double narrow_identical = std::abs(alpha_finite_window(p, p, 0.0, 1e-3).alpha_sq - 1.0);
  Worst wide;
  for (double dt : {0.0, 0.5, 1.5})
    for (double tau : {50.0, 100.0, 400.0}) {
      const Wavepacket d = Wavepacket::gaussian(0.3, 1.2, dt);
      wide.add(std::abs(alpha_finite_window(p, d, 0.5 * dt, tau * p.coherence_time()).alpha_sq -
                        alpha_infinite_window(p, d).alpha_sq));
    }
  Gen gen(8);
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 300; ++k) {
    const Wavepacket a = Wavepacket::gaussian(gen.uniform(-1, 1), gen.uniform(0.2, 3.0), gen.uniform(-2, 2));
    const Wavepacket b = Wavepacket::gaussian(gen.uniform(-1, 1), gen.uniform(0.2, 3.0), gen.uniform(-2, 2));
    std::vector<double> values = {alpha_infinite_window(a, b).alpha_sq};
    try {
      values.push_back(alpha_finite_window(a, b, gen.uniform(-1, 1), std::exp(gen.uniform(-4, 3))).alpha_sq);
    } catch (const EmptyWindow&) {
    }
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const bool ok = identical <= 1e-10 && narrow <= 1e-4 && narrow_identical <= 1e-4 && wide.value <= 1e-6 &&
                  lo >= 0.0 && hi <= 1.0 + 1e-10;
  return {ok, fmt("identical %.2e, tau->0 %.2e, wide-window gap %.2e", identical, std::max(narrow, narrow_identical),
                  wide.value) +
                  fmt(", range [%.3g, %.12g]", lo, hi)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  auto run_to = [&](std::vector<std::string> args, const std::string& name) {
    const fs::path p = dir / ("bellsplit_acceptance_" + name);
    args.push_back("--out");
    args.push_back(p.string());
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    std::ifstream in(p, std::ios::binary);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    fs::remove(p);
    return std::pair{code, text};
  };
  const auto scan1 = run_to({"scan", "--grid", "200x200"}, "scan1.csv");
  const auto scan2 = run_to({"scan", "--grid", "200x200"}, "scan2.csv");
  const auto ver1 = run_to({"verify", "--count", "100", "--seed", "1"}, "verify1.txt");
  const auto ver2 = run_to({"verify", "--count", "100", "--seed", "1"}, "verify2.txt");
  const bool ok = scan1.first == 0 && ver1.first == 0 && !scan1.second.empty() && !ver1.second.empty() &&
                  scan1 == scan2 && ver1 == ver2;
  std::ostringstream d;
  d << "scan " << scan1.second.size() << " bytes " << (scan1 == scan2 ? "identical" : "DIFFERENT") << ", verify "
    << ver1.second.size() << " bytes " << (ver1 == ver2 ? "identical" : "DIFFERENT");
  return {ok, d.str()};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double time_limit;  // seconds, 0 = none
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"concurrence oracle equivalence", concurrence_oracles, 10.0},
      {"bell spectrum three-way equality", bell_spectrum, 0.0},
      {"brute-force CHSH vs Horodecki", chsh_vs_horodecki, 60.0},
      {"pure-state Gisin relation", gisin, 0.0},
      {"balanced-slice reproduction", balanced_slice, 60.0},
      {"trace identities", trace_identities_suite, 0.0},
      {"decomposition round trips", round_trips, 0.0},
      {"wavepacket limits", wavepacket_limits, 0.0},
      {"determinism of scan and verify", determinism, 0.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].time_limit > 0.0 && seconds > criteria[i].time_limit) {
      o.passed = false;
      o.detail += fmt("; exceeded %.0f s limit", criteria[i].time_limit);
    }
    std::printf("[%s] %zu %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                seconds);
    if (!o.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
