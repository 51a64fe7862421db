#include "bellsplit/wavepacket.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bellsplit/errors.hpp"

namespace bellsplit {

namespace {

using namespace std::complex_literals;

constexpr double kSpectralCutoff = 8.0;   // Gaussian |psi|^2 tail below 1e-14
constexpr double kTemporalCutoff = 12.0;  // |psi~(t)| ~ exp(-144) beyond t0 +- 12/sigma
constexpr double kQuadratureTolerance = 1e-9;
constexpr double kEmptyWindow = 1e-14;
constexpr double kPanelAbsoluteTolerance = 1e-16;

// \int_0^1 (1-s) e^{i theta s} ds and \int_0^1 s e^{i theta s} ds.
std::pair<Complex, Complex> linear_phase_moments(double theta) {
  if (std::abs(theta) < 0.5) {
    Complex e0{}, e2{};
    Complex power = 1.0;  // (i theta)^k / k!
    for (int k = 0; k < 20; ++k) {
      e0 += power / double(k + 1);
      e2 += power / double(k + 2);
      power *= 1i * theta / double(k + 1);
    }
    return {e0 - e2, e2};
  }
  const Complex e = std::exp(1i * theta);
  const Complex e0 = (e - 1.0) / (1i * theta);
  const Complex e2 = e / (1i * theta) + (e - 1.0) / (theta * theta);
  return {e0 - e2, e2};
}

struct QuadratureResult {
  Complex value{};
  double error = 0.0;
};

template <typename F>
QuadratureResult integrate_panels(F&& f, const std::vector<double>& nodes) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult out;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    if (!(nodes[k + 1] > nodes[k])) continue;
    double err = 0.0;
    // Integrands are bounded by products of unit-norm amplitudes, so an absolute
    // floor is meaningful and stops recursion on panels that are numerically zero.
    Complex v = gauss_kronrod<double, 15>::integrate(f, nodes[k], nodes[k + 1], 0, 0.0, &err);
    if (err > kPanelAbsoluteTolerance)
      v = gauss_kronrod<double, 15>::integrate(f, nodes[k], nodes[k + 1], 15, 1e-13, &err);
    out.value += v;
    out.error += err;
  }
  return out;
}

std::vector<double> panel_nodes(double lo, double hi, std::size_t panels, std::vector<double> extra = {}) {
  std::vector<double> nodes;
  nodes.reserve(panels + 1 + extra.size());
  for (std::size_t k = 0; k <= panels; ++k) nodes.push_back(lo + (hi - lo) * double(k) / double(panels));
  for (double x : extra)
    if (x > lo && x < hi) nodes.push_back(x);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

void require_converged(const QuadratureResult& r, const char* what) {
  if (!(r.error <= kQuadratureTolerance) || !std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
    throw QuadratureNotConverged(std::string(what) + ": estimated quadrature error " + std::to_string(r.error));
}

}  // namespace

Wavepacket Wavepacket::gaussian(double center, double width, double delay) {
  if (!std::isfinite(center) || !std::isfinite(width) || !std::isfinite(delay) || !(width > 0.0))
    throw InvalidInput("Gaussian packet needs finite center/delay and width > 0");
  return Wavepacket(GaussianShape{center, width, delay});
}

Wavepacket Wavepacket::tabulated(std::vector<double> omega, std::vector<Complex> amplitude) {
  if (omega.size() != amplitude.size()) throw InvalidInput("tabulated packet: omega and amplitude sizes differ");
  if (omega.size() < 2) throw InvalidInput("tabulated packet needs at least two samples");
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (!std::isfinite(omega[k]) || !std::isfinite(amplitude[k].real()) || !std::isfinite(amplitude[k].imag()))
      throw InvalidInput("tabulated packet has non-finite values");
    if (k > 0 && !(omega[k] > omega[k - 1]))
      throw InvalidInput("tabulated packet grid must be strictly increasing in omega");
  }
  // Exact L2 norm of the piecewise-linear interpolant (Simpson on each interval).
  double norm2 = 0.0;
  for (std::size_t k = 0; k + 1 < omega.size(); ++k) {
    const Complex a = amplitude[k];
    const Complex b = amplitude[k + 1];
    norm2 += (omega[k + 1] - omega[k]) * (std::norm(a) + (std::conj(a) * b).real() + std::norm(b)) / 3.0;
  }
  if (!(norm2 > 0.0)) throw InvalidInput("tabulated packet has zero norm");
  const double factor = 1.0 / std::sqrt(norm2);
  for (auto& a : amplitude) a *= factor;
  return Wavepacket(TabulatedShape{std::move(omega), std::move(amplitude)}, factor);
}

Complex Wavepacket::spectral(double omega) const {
  if (const auto* g = std::get_if<GaussianShape>(&shape_)) {
    const double norm = std::pow(2.0 * std::numbers::pi * g->width * g->width, -0.25);
    const double x = (omega - g->center) / g->width;
    return phase_ * norm * std::exp(-0.25 * x * x) * std::exp(-1i * (omega * g->delay));
  }
  const auto& tab = std::get<TabulatedShape>(shape_);
  if (omega < tab.omega.front() || omega > tab.omega.back()) return 0.0;
  const auto it = std::upper_bound(tab.omega.begin(), tab.omega.end(), omega);
  const std::size_t hi = std::min<std::size_t>(it - tab.omega.begin(), tab.omega.size() - 1);
  const std::size_t lo = hi - 1;
  const double s = (omega - tab.omega[lo]) / (tab.omega[hi] - tab.omega[lo]);
  return phase_ * ((1.0 - s) * tab.amplitude[lo] + s * tab.amplitude[hi]);
}

Complex Wavepacket::temporal(double t) const {
  if (const auto* g = std::get_if<GaussianShape>(&shape_)) {
    const double s = t - g->delay;
    const double norm = std::pow(2.0 * g->width * g->width / std::numbers::pi, 0.25);
    return phase_ * norm * std::exp(-g->width * g->width * s * s) * std::exp(1i * (g->center * s));
  }
  // Exact transform of the piecewise-linear interpolant.
  const auto& tab = std::get<TabulatedShape>(shape_);
  Complex sum{};
  for (std::size_t k = 0; k + 1 < tab.omega.size(); ++k) {
    const double h = tab.omega[k + 1] - tab.omega[k];
    const auto [m1, m2] = linear_phase_moments(t * h);
    sum += std::exp(1i * (tab.omega[k] * t)) * h * (tab.amplitude[k] * m1 + tab.amplitude[k + 1] * m2);
  }
  return phase_ * sum / std::sqrt(2.0 * std::numbers::pi);
}

std::pair<double, double> Wavepacket::spectral_support() const {
  if (const auto* g = std::get_if<GaussianShape>(&shape_))
    return {g->center - kSpectralCutoff * g->width, g->center + kSpectralCutoff * g->width};
  const auto& tab = std::get<TabulatedShape>(shape_);
  return {tab.omega.front(), tab.omega.back()};
}

std::pair<double, double> Wavepacket::temporal_support() const {
  if (const auto* g = std::get_if<GaussianShape>(&shape_))
    return {g->delay - kTemporalCutoff / g->width, g->delay + kTemporalCutoff / g->width};
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

std::vector<double> Wavepacket::spectral_breakpoints() const {
  if (const auto* tab = std::get_if<TabulatedShape>(&shape_)) return tab->omega;
  return {};
}

double Wavepacket::coherence_time() const {
  if (const auto* g = std::get_if<GaussianShape>(&shape_)) return 1.0 / g->width;
  const auto& tab = std::get<TabulatedShape>(shape_);
  return 2.0 * std::numbers::pi / (tab.omega.back() - tab.omega.front());
}

Wavepacket Wavepacket::with_phase(double phase) const {
  return Wavepacket(shape_, factor_, phase_ * std::exp(1i * phase));
}

OverlapAlpha alpha_infinite_window(const Wavepacket& psi, const Wavepacket& phi) {
  const auto [plo, phi_hi_psi] = psi.spectral_support();
  const auto [qlo, qhi] = phi.spectral_support();
  const double lo = std::max(plo, qlo);
  const double hi = std::min(phi_hi_psi, qhi);
  OverlapAlpha out;
  if (!(hi > lo)) return out;

  std::vector<double> extra = psi.spectral_breakpoints();
  const auto more = phi.spectral_breakpoints();
  extra.insert(extra.end(), more.begin(), more.end());
  const std::size_t panels = extra.empty() ? 16 : 1;
  const auto nodes = panel_nodes(lo, hi, panels, std::move(extra));

  const auto r = integrate_panels([&](double w) { return phi.spectral(w) * std::conj(psi.spectral(w)); }, nodes);
  require_converged(r, "spectral overlap");
  out.alpha = r.value;
  out.alpha_sq = std::norm(r.value);
  return out;
}

OverlapAlpha alpha_finite_window(const Wavepacket& psi, const Wavepacket& phi, double t, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau) || !std::isfinite(t))
    throw InvalidInput("coincidence window needs finite t and tau > 0");
  const double wlo = t - 0.5 * tau;
  const double whi = t + 0.5 * tau;

  auto window_nodes = [&](std::pair<double, double> a, std::pair<double, double> b) {
    const double lo = std::max({wlo, a.first, b.first});
    const double hi = std::min({whi, a.second, b.second});
    if (!(hi > lo)) return std::vector<double>{};
    const double scale = std::min(psi.coherence_time(), phi.coherence_time());
    const auto panels = static_cast<std::size_t>(std::clamp(std::ceil(2.0 * (hi - lo) / scale), 1.0, 512.0));
    return panel_nodes(lo, hi, panels);
  };

  const auto sp = psi.temporal_support();
  const auto sq = phi.temporal_support();

  const auto psi_nodes = window_nodes(sp, sp);
  const auto phi_nodes = window_nodes(sq, sq);
  const auto joint_nodes = window_nodes(sp, sq);

  const auto psi_norm = integrate_panels([&](double x) { return Complex(std::norm(psi.temporal(x))); }, psi_nodes);
  const auto phi_norm = integrate_panels([&](double x) { return Complex(std::norm(phi.temporal(x))); }, phi_nodes);
  require_converged(psi_norm, "window weight of psi");
  require_converged(phi_norm, "window weight of phi");
  if (psi_norm.value.real() < kEmptyWindow || phi_norm.value.real() < kEmptyWindow)
    throw EmptyWindow("a wavepacket has no amplitude inside the coincidence window");

  const auto cross =
      integrate_panels([&](double x) { return phi.temporal(x) * std::conj(psi.temporal(x)); }, joint_nodes);
  require_converged(cross, "windowed overlap");

  OverlapAlpha out;
  out.alpha = cross.value / std::sqrt(psi_norm.value.real() * phi_norm.value.real());
  out.alpha_sq = std::norm(out.alpha);
  return out;
}

double temporal_distinguishability(const OverlapAlpha& a) { return 1.0 - a.alpha_sq; }

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  return fields;
}

double parse_number(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw InvalidInput("wavepacket CSV line " + std::to_string(line_no) + ": '" + text + "' is not a number");
  return value;
}

}  // namespace

LoadedWavepacket read_wavepacket_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> omega;
  std::vector<Complex> amplitude;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (!header_seen) {
      for (auto& f : fields) std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return std::tolower(c); });
      if (fields != std::vector<std::string>{"omega", "re", "im"})
        throw InvalidInput("wavepacket CSV header must be 'omega,re,im'");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      throw InvalidInput("wavepacket CSV line " + std::to_string(line_no) + " must have 3 columns");
    omega.push_back(parse_number(fields[0], line_no));
    amplitude.emplace_back(parse_number(fields[1], line_no), parse_number(fields[2], line_no));
  }
  if (!header_seen) throw InvalidInput("wavepacket CSV is empty (header row required)");

  Wavepacket packet = Wavepacket::tabulated(std::move(omega), std::move(amplitude));
  const double factor = packet.normalization_factor();
  return LoadedWavepacket{std::move(packet), factor};
}

LoadedWavepacket read_wavepacket_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open wavepacket CSV '" + path.string() + "'");
  return read_wavepacket_csv(in);
}

}  // namespace bellsplit
