#include "bellsplit/campaign.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bellsplit/bell.hpp"
#include "bellsplit/decomp.hpp"
#include "bellsplit/errors.hpp"
#include "bellsplit/scattering.hpp"
#include "bellsplit/state.hpp"

namespace bellsplit {

namespace {

constexpr std::array<double, 5> kAlphaLadder = {0.0, 0.25, 0.5, 0.75, 1.0};

class Suite {
 public:
  Suite(std::string name, double tolerance) { result_ = {std::move(name), 0.0, tolerance, 0, 0}; }

  void record(double deviation) {
    ++result_.checks;
    // NaN must fail the suite.
    if (std::isnan(deviation) || deviation > result_.max_deviation) result_.max_deviation = deviation;
  }
  void skip() { ++result_.skipped; }
  const SuiteResult& result() const { return result_; }

 private:
  SuiteResult result_;
};

double multiset_gap(std::array<double, 3> a, std::array<double, 3> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double gap = 0.0;
  for (std::size_t i = 0; i < 3; ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

double pair_gap(std::array<double, 2> a, std::array<double, 2> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

VerifyReport run_campaign(const VerifyOptions& options) {
  if (options.count == 0) throw InvalidInput("verify needs count >= 1");
  const Tolerances& tol = options.tolerances;

  Suite traces("trace_identities", tol.identity);
  Suite conc_gamma("concurrence_gamma", tol.identity);
  Suite conc_wootters("concurrence_wootters", tol.oracle);
  Suite health("state_health", tol.identity);
  Suite mandel("mandel_dip", tol.identity);
  Suite spectrum("bell_spectrum", tol.oracle);
  Suite horodecki("emax_horodecki", tol.oracle);
  Suite gisin("gisin_pure_state", tol.oracle);
  Suite semi("semi_polar", tol.identity);
  Suite consistency("consistency_check", tol.oracle);
  Suite polar("polar_decomposition", tol.identity);
  Suite canonical("canonical_input", tol.identity);

  Rng rng(options.seed);
  for (std::size_t n = 0; n < options.count; ++n) {
    const ScatteringMatrix s = make_scattering(haar_unitary<4>(rng));
    const HybridMatrix x = hybrid(s);
    const GammaPair g = gammas(s);
    const GammaPair g_rho = options.inject_fault ? gammas(s, Statistics::fermionic) : g;

    traces.record(trace_identities(s).max_defect());

    for (const double a : kAlphaLadder) {
      const PolarizationState state = build_rho(g_rho, a);
      const double c = concurrence_closed(x, a);
      conc_gamma.record(std::abs(c - concurrence_gamma(g, a)));
      conc_wootters.record(std::abs(c - concurrence_wootters(state.rho)));

      const StateDiagnostics d = diagnose(state.rho);
      health.record(std::max({d.hermitian_defect, d.trace_defect, -d.min_eigenvalue, std::abs(d.third_eigenvalue)}));
      mandel.record(std::abs(mandel_dip(x, a).coincidence_prob - 0.5 * state.normalization));

      const BellReport bell = emax_closed(x.gram, a);
      const RMat3 r = correlation_matrix(state.rho);
      const std::array<double, 3> closed_u = {bell.u1, bell.u2, bell.u3};
      double gap = std::max(multiset_gap(closed_u, rtr_spectrum(r)),
                            max_abs_diff(r, correlation_matrix_gamma(g, a)));
      try {
        const SemiPolar sp = semi_polar(g);
        const RPrime rp = r_prime(sp, a, state.normalization);
        gap = std::max({gap, multiset_gap(closed_u, rp.u()), multiset_gap(closed_u, rtr_spectrum(rp.matrix())),
                        max_abs_diff(r, left_frame(sp.u) * rp.matrix() * transpose(right_frame(sp.v)))});
      } catch (const DegenerateXi&) {
        spectrum.skip();
      }
      spectrum.record(gap);
      horodecki.record(std::abs(bell.emax_closed - emax_horodecki(state.rho)));
      if (a == 1.0) gisin.record(std::abs(bell.emax_closed - 2.0 * std::sqrt(1.0 + c * c)));
    }

    try {
      const SemiPolar sp = semi_polar(g);
      const double norm1 = inner(g.gamma1, g.gamma1).real();
      const CMat2 a_mat = adjoint(sp.u) * g.gamma1 * adjoint(sp.v);
      semi.record(std::max({max_abs_diff(sp.gamma1(), g.gamma1), max_abs_diff(sp.gamma2(), g.gamma2),
                            std::abs(sp.c1 * sp.c1 + sp.c2 * sp.c3 - 1.0),
                            std::abs(sp.c1 * sp.c1 * (sp.xi[0] + sp.xi[1]) + sp.c2 * sp.c2 * sp.xi[1] +
                                     sp.c3 * sp.c3 * sp.xi[0] - norm1),
                            std::abs(determinant(a_mat) + std::sqrt(sp.xi[0] * sp.xi[1])), sp.xi_trace_defect,
                            sp.q_imag_defect}));

      const ConsistencyCheck cc = consistency_check(x);
      const double ok = cc.am_gm_holds && cc.solvable ? 0.0 : 1.0;
      consistency.record(std::max({ok, cc.xi_defect, cc.c1_defect, cc.norm_defect,
                                   pair_gap(cc.xi, sp.xi), std::abs(cc.c1 - sp.c1),
                                   pair_gap({cc.a12, cc.a21}, {sp.c2 * std::sqrt(sp.xi[1]), sp.c3 * std::sqrt(sp.xi[0])})}));
    } catch (const DegenerateXi&) {
      semi.skip();
      consistency.skip();
    }

    try {
      polar.record(max_abs_diff(polar_decompose_s(s).reassemble(), s.matrix()));
    } catch (const DegenerateTransmission&) {
      polar.skip();
    }

    const std::array<Complex, 2> left = {rng.complex_normal(), rng.complex_normal()};
    const std::array<Complex, 2> right = {rng.complex_normal(), rng.complex_normal()};
    const CMat2 sigma{{left[0] * right[0], left[0] * right[1]}, {left[1] * right[0], left[1] * right[1]}};
    const CanonicalInput ci = canonicalize_input(s, sigma);
    canonical.record(
        max_abs_diff(ci.scale * outgoing_matrix(ci.scattering, sigma_in()), outgoing_matrix(s, sigma)));
  }

  VerifyReport report;
  report.options = options;
  for (const Suite* suite : {&traces, &conc_gamma, &conc_wootters, &health, &mandel, &spectrum, &horodecki, &gisin,
                             &semi, &consistency, &polar, &canonical})
    report.suites.push_back(suite->result());
  return report;
}

void write_report(std::ostream& out, const VerifyReport& report) {
  char line[160];
  const Tolerances& t = report.options.tolerances;
  std::snprintf(line, sizeof line, "bellsplit %s verify count=%zu seed=%llu%s\n", std::string(version()).c_str(),
                report.options.count, static_cast<unsigned long long>(report.options.seed),
                report.options.inject_fault ? " fault=sign_flip" : "");
  out << line;
  std::snprintf(line, sizeof line, "tolerances construction=%.1e identity=%.1e oracle=%.1e\n", t.construction,
                t.identity, t.oracle);
  out << line;
  for (const SuiteResult& s : report.suites) {
    std::snprintf(line, sizeof line, "%-22s max_dev=%.3e tol=%.1e checks=%zu skipped=%zu %s\n", s.name.c_str(),
                  s.max_deviation, s.tolerance, s.checks, s.skipped, s.passed() ? "PASS" : "FAIL");
    out << line;
  }
  out << "result " << (report.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace bellsplit
