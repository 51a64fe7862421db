#include "bellsplit/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellsplit/errors.hpp"

namespace bellsplit {

namespace {

constexpr double kZeroCoincidence = 1e-14;

double checked_alpha_sq(double alpha_sq) {
  if (!std::isfinite(alpha_sq) || alpha_sq < -1e-10 || alpha_sq > 1.0 + 1e-10)
    throw InvalidInput("|alpha|^2 must lie in [0,1], got " + std::to_string(alpha_sq));
  return std::clamp(alpha_sq, 0.0, 1.0);
}

double clamp_unit(double c) { return std::clamp(c, 0.0, 1.0); }

std::array<double, 4> wootters_singular_values(const CMat4& rho) {
  const auto eig = herm_eigen(rho);
  std::array<Complex, 4> roots{};
  for (std::size_t i = 0; i < 4; ++i) roots[i] = std::sqrt(std::max(0.0, eig.values[i]));
  const CMat4 sqrt_rho = eig.vectors * CMat4::diagonal(roots) * adjoint(eig.vectors);
  const CMat4 flip = kron(pauli(Axis::y), pauli(Axis::y));
  return svd(sqrt_rho * flip * conj(sqrt_rho)).s;
}

}  // namespace

PolarizationState build_rho(const GammaPair& g, double alpha_sq) {
  const double a = checked_alpha_sq(alpha_sq);
  const double w1 = 1.0 + a;
  const double w2 = 1.0 - a;
  const double n = w1 * inner(g.gamma1, g.gamma1).real() + w2 * inner(g.gamma2, g.gamma2).real();
  if (!(0.5 * n > kZeroCoincidence))
    throw ZeroCoincidence("no coincidence events survive postselection (N = " + std::to_string(n) + ")");

  PolarizationState state;
  state.rho = (w1 / n) * outer(vec(g.gamma1)) + (w2 / n) * outer(vec(g.gamma2));
  state.source = g;
  state.alpha_sq = a;
  state.normalization = n;
  return state;
}

StateDiagnostics diagnose(const CMat4& rho) {
  StateDiagnostics d;
  d.hermitian_defect = hermitian_defect(rho);
  d.trace_defect = std::abs(trace(rho) - 1.0);
  const auto eig = herm_eigen(0.5 * (rho + adjoint(rho)));
  d.min_eigenvalue = eig.values[3];
  d.third_eigenvalue = eig.values[2];
  return d;
}

double concurrence_closed(const CMat2& gram, double alpha_sq, Statistics statistics) {
  const double a = checked_alpha_sq(alpha_sq);
  const double det = determinant(gram).real();
  const double det_c = determinant(CMat2::identity() - gram).real();
  const double tr = trace(gram).real();
  double per = permanent(gram).real();
  double det_term = det;
  if (statistics == Statistics::fermionic) std::swap(per, det_term);

  const double denominator = tr - (1.0 + a) * per - (1.0 - a) * det_term;
  if (!(denominator > kZeroCoincidence))
    throw ZeroCoincidence("coincidence probability vanishes (" + std::to_string(denominator) + ")");
  const double numerator = 2.0 * a * std::sqrt(std::max(0.0, det) * std::max(0.0, det_c));
  return clamp_unit(numerator / denominator);
}

double concurrence_closed(const HybridMatrix& x, double alpha_sq, Statistics statistics) {
  return concurrence_closed(x.gram, alpha_sq, statistics);
}

double concurrence_gamma(const GammaPair& g, double alpha_sq) {
  const double a = checked_alpha_sq(alpha_sq);
  const auto t = gamma_traces_direct(g);
  const double n = (1.0 + a) * t.norm1 + (1.0 - a) * t.norm2;
  if (!(0.5 * n > kZeroCoincidence)) throw ZeroCoincidence("no coincidence events survive postselection");
  return clamp_unit(2.0 * a * t.tilde_abs / n);
}

std::array<double, 4> wootters_spectrum(const CMat4& rho) {
  auto s = wootters_singular_values(rho);
  for (auto& v : s) v *= v;
  return s;
}

double concurrence_wootters(const CMat4& rho) {
  const auto s = wootters_singular_values(rho);
  return clamp_unit(s[0] - s[1] - s[2] - s[3]);
}

double concurrence_wootters(const PolarizationState& state) { return concurrence_wootters(state.rho); }

MandelDip mandel_dip(const CMat2& gram, double alpha_sq, Statistics statistics) {
  const double a = checked_alpha_sq(alpha_sq);
  const double hh = gram(0, 0).real();
  const double vv = gram(1, 1).real();
  const double hv_sq = std::norm(gram(0, 1));
  MandelDip m;
  m.classical_prob = hh + vv - 2.0 * hh * vv;
  m.dip = (statistics == Statistics::bosonic ? -2.0 : 2.0) * a * hv_sq;
  m.coincidence_prob = m.classical_prob + m.dip;
  return m;
}

MandelDip mandel_dip(const HybridMatrix& x, double alpha_sq, Statistics statistics) {
  return mandel_dip(x.gram, alpha_sq, statistics);
}

double ConcurrenceReport::max_route_gap() const {
  return std::max({std::abs(c_closed - c_gamma), std::abs(c_closed - c_wootters), std::abs(c_gamma - c_wootters)});
}

ConcurrenceReport concurrence_report(const ScatteringMatrix& s, double alpha_sq, Statistics statistics) {
  const GammaPair g = gammas(s, statistics);
  const HybridMatrix x = hybrid(s);
  ConcurrenceReport r;
  r.c_closed = concurrence_closed(x, alpha_sq, statistics);
  r.c_gamma = concurrence_gamma(g, alpha_sq);
  r.c_wootters = concurrence_wootters(build_rho(g, alpha_sq));
  r.mandel = mandel_dip(x, alpha_sq, statistics);
  r.coincidence_prob = r.mandel.coincidence_prob;
  return r;
}

void to_json(nlohmann::json& j, const PolarizationState& state) {
  j = matrix_to_json(state.rho);
  j["provenance"] = {{"alpha_sq", state.alpha_sq},
                     {"statistics", std::string(to_string(state.source.statistics))},
                     {"normalization", state.normalization}};
}

void to_json(nlohmann::json& j, const MandelDip& m) {
  j = nlohmann::json{{"dip", m.dip}, {"classical_prob", m.classical_prob}, {"coincidence_prob", m.coincidence_prob}};
}

void to_json(nlohmann::json& j, const ConcurrenceReport& r) {
  j = nlohmann::json{{"closed", r.c_closed},
                     {"gamma", r.c_gamma},
                     {"wootters", r.c_wootters},
                     {"mandel_dip", r.mandel},
                     {"coincidence_prob", r.coincidence_prob}};
}

}  // namespace bellsplit
