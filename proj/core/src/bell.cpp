#include "bellsplit/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bellsplit/errors.hpp"
#include "bellsplit/state.hpp"

namespace bellsplit {

namespace {

constexpr double kZeroCoincidence = 1e-14;
constexpr std::size_t kAzimuthCells = 24;
constexpr std::size_t kPolarCells = 12;

CMat2 observable(const AnalyzerSetting& s) { return adjoint(s.rotation) * pauli(Axis::z) * s.rotation; }

BlochVector bloch(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

BlochVector mat_vec(const RMat3& r, const BlochVector& v) {
  BlochVector out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += r(i, j) * v[j];
  return out;
}

double norm3(const BlochVector& v) { return std::hypot(v[0], v[1], v[2]); }

// Axis of a unit vector as (polar, azimuth); the pole maps to azimuth 0.
std::pair<double, double> angles_of(const BlochVector& v) {
  const double n = norm3(v);
  if (n == 0.0) return {0.0, 0.0};
  return {std::acos(std::clamp(v[2] / n, -1.0, 1.0)), std::atan2(v[1], v[0])};
}

// max over left settings of the CHSH combination for right axes b, b'.
struct ChshObjective {
  RMat3 r;

  double operator()(const std::array<double, 4>& p) const {
    const BlochVector rb = mat_vec(r, bloch(p[0], p[1]));
    const BlochVector rbp = mat_vec(r, bloch(p[2], p[3]));
    return value(rb, rbp);
  }

  static double value(const BlochVector& rb, const BlochVector& rbp) {
    return std::hypot(rb[0] + rbp[0], rb[1] + rbp[1], rb[2] + rbp[2]) +
           std::hypot(rb[0] - rbp[0], rb[1] - rbp[1], rb[2] - rbp[2]);
  }
};

struct Candidate {
  double value = -1.0;
  std::array<double, 4> p{};
};

// Compass search with step halving; returns the evaluations used.
int refine(const ChshObjective& f, Candidate& c, int budget) {
  double step = std::numbers::pi / static_cast<double>(kPolarCells);
  int used = 0;
  while (step > 1e-10 && used < budget) {
    bool improved = false;
    for (std::size_t k = 0; k < 4 && used < budget; ++k) {
      for (const double dir : {1.0, -1.0}) {
        if (used >= budget) break;
        auto trial = c.p;
        trial[k] += dir * step;
        const double v = f(trial);
        ++used;
        if (v > c.value) {
          c.value = v;
          c.p = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return used;
}

AnalyzerSetting left_setting(const BlochVector& v) {
  const auto [polar, azimuth] = angles_of(v);
  return AnalyzerSetting::from_axis(polar, azimuth);
}

}  // namespace

AnalyzerSetting AnalyzerSetting::from_angles(double theta, double phi, double lambda) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  AnalyzerSetting a;
  a.rotation = CMat2{{c, -std::polar(s, lambda)}, {std::polar(s, phi), std::polar(c, phi + lambda)}};
  a.angles = {theta, phi, lambda};
  return a;
}

AnalyzerSetting AnalyzerSetting::from_axis(double polar, double azimuth) {
  return from_angles(-polar, 0.0, -azimuth);
}

BlochVector AnalyzerSetting::axis() const {
  const CMat2 m = observable(*this);
  return {m(1, 0).real(), m(1, 0).imag(), m(0, 0).real()};
}

std::array<double, 4> coincidence_probs(const CMat4& rho, const AnalyzerSetting& left, const AnalyzerSetting& right) {
  const CMat4 u = kron(left.rotation, right.rotation);
  const CMat4 rotated = u * rho * adjoint(u);
  return {rotated(0, 0).real(), rotated(1, 1).real(), rotated(2, 2).real(), rotated(3, 3).real()};
}

double correlator_e(const CMat4& rho, const AnalyzerSetting& left, const AnalyzerSetting& right) {
  const auto p = coincidence_probs(rho, left, right);
  const double total = p[0] + p[1] + p[2] + p[3];
  if (!(total > kZeroCoincidence)) throw ZeroCoincidence("no coincidences at these analyzer settings");
  return (p[0] + p[3] - p[1] - p[2]) / total;
}

double correlator_trace(const CMat4& rho, const AnalyzerSetting& left, const AnalyzerSetting& right) {
  return trace(rho * kron(observable(left), observable(right))).real();
}

double chsh_value(const CMat4& rho, const AnalyzerSetting& a, const AnalyzerSetting& a_prime,
                  const AnalyzerSetting& b, const AnalyzerSetting& b_prime) {
  return std::abs(correlator_e(rho, a, b) + correlator_e(rho, a_prime, b) + correlator_e(rho, a, b_prime) -
                  correlator_e(rho, a_prime, b_prime));
}

RMat3 correlation_matrix(const CMat4& rho) {
  constexpr Axis axes[3] = {Axis::x, Axis::y, Axis::z};
  RMat3 r;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l) r(k, l) = trace(rho * kron(pauli(axes[k]), pauli(axes[l]))).real();
  return r;
}

RMat3 correlation_matrix_gamma(const GammaPair& g, double alpha_sq) {
  constexpr Axis axes[3] = {Axis::x, Axis::y, Axis::z};
  const double w1 = 1.0 + alpha_sq;
  const double w2 = 1.0 - alpha_sq;
  const double n = w1 * inner(g.gamma1, g.gamma1).real() + w2 * inner(g.gamma2, g.gamma2).real();
  if (!(0.5 * n > kZeroCoincidence)) throw ZeroCoincidence("no coincidence events survive postselection");
  RMat3 r;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t l = 0; l < 3; ++l) {
      const CMat2 sk = pauli(axes[k]);
      const CMat2 slt = transpose(pauli(axes[l]));
      const double t1 = trace(adjoint(g.gamma1) * sk * g.gamma1 * slt).real();
      const double t2 = trace(adjoint(g.gamma2) * sk * g.gamma2 * slt).real();
      r(k, l) = (w1 * t1 + w2 * t2) / n;
    }
  }
  return r;
}

std::array<double, 3> rtr_spectrum(const RMat3& r) {
  auto values = herm_eigen(transpose(r) * r).values;
  for (auto& v : values) v = std::max(0.0, v);
  return values;
}

UEigen u_eigen_closed(const CMat2& gram, double alpha_sq, Statistics statistics) {
  if (!std::isfinite(alpha_sq) || alpha_sq < -1e-10 || alpha_sq > 1.0 + 1e-10)
    throw InvalidInput("|alpha|^2 must lie in [0,1], got " + std::to_string(alpha_sq));
  const double a = std::clamp(alpha_sq, 0.0, 1.0);
  const GammaTraces t = gamma_traces_closed(gram, statistics);
  const double n = (1.0 + a) * t.norm1 + (1.0 - a) * t.norm2;
  if (!(0.5 * n > kZeroCoincidence)) throw ZeroCoincidence("coincidence probability vanishes");

  const double n_sq = n * n;
  const double tau_sq = t.tilde_abs * t.tilde_abs;
  const double mix = 4.0 * (1.0 - a * a);
  const double tr = n_sq + 4.0 * tau_sq - mix * (t.norm1 * t.norm2 - t.inner * t.inner);
  const double det = 4.0 * tau_sq * (n_sq - mix * t.norm1 * t.norm2);
  const double root = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));

  UEigen u;
  u.u1 = (tr + root) / (2.0 * n_sq);
  u.u2 = (tr - root) / (2.0 * n_sq);
  u.u3 = 4.0 * a * a * tau_sq / n_sq;
  return u;
}

UEigen u_eigen_closed(const HybridMatrix& x, double alpha_sq, Statistics statistics) {
  return u_eigen_closed(x.gram, alpha_sq, statistics);
}

std::string_view to_string(Branch b) { return b == Branch::u3_active ? "u3_active" : "u2_active"; }

BellReport emax_closed(const CMat2& gram, double alpha_sq, Statistics statistics) {
  const UEigen u = u_eigen_closed(gram, alpha_sq, statistics);
  BellReport r;
  r.u1 = u.u1;
  r.u2 = u.u2;
  r.u3 = u.u3;
  r.branch = u.u3 >= u.u2 ? Branch::u3_active : Branch::u2_active;
  r.emax_closed = 2.0 * std::sqrt(std::max(0.0, u.u1 + std::max(u.u2, u.u3)));
  r.violating = r.emax_closed > 2.0;
  return r;
}

double emax_horodecki(const CMat4& rho) {
  const auto s = rtr_spectrum(correlation_matrix(rho));
  return 2.0 * std::sqrt(s[0] + s[1]);
}

BellReport emax(const ScatteringMatrix& s, double alpha_sq, Statistics statistics,
                std::optional<int> bruteforce_budget) {
  BellReport r = emax_closed(hybrid(s).gram, alpha_sq, statistics);
  const PolarizationState state = build_rho(gammas(s, statistics), alpha_sq);
  r.emax_horodecki = emax_horodecki(state.rho);
  if (bruteforce_budget) r.emax_bruteforce = chsh_bruteforce(state.rho, *bruteforce_budget).value;
  return r;
}

ChshOptimum chsh_bruteforce(const CMat4& rho, int budget) {
  if (budget < kMinChshBudget)
    throw InvalidInput("brute-force budget must be at least " + std::to_string(kMinChshBudget));
  const ChshObjective f{correlation_matrix(rho)};

  // Cell-centred polar angles avoid duplicating the poles.
  constexpr std::size_t cells = kAzimuthCells * kPolarCells;
  std::array<std::array<double, 2>, cells> grid{};
  std::array<BlochVector, cells> images{};
  for (std::size_t i = 0; i < kPolarCells; ++i) {
    for (std::size_t j = 0; j < kAzimuthCells; ++j) {
      const double polar = (static_cast<double>(i) + 0.5) * std::numbers::pi / kPolarCells;
      const double azimuth = static_cast<double>(j) * 2.0 * std::numbers::pi / kAzimuthCells;
      grid[i * kAzimuthCells + j] = {polar, azimuth};
      images[i * kAzimuthCells + j] = mat_vec(f.r, bloch(polar, azimuth));
    }
  }

  // Keep the best few distinct starting pairs, in scan order on ties.
  constexpr std::size_t kStarts = 3;
  std::array<Candidate, kStarts> best{};
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t j = i + 1; j < cells; ++j) {
      const double v = ChshObjective::value(images[i], images[j]);
      if (v <= best[kStarts - 1].value) continue;
      Candidate c{v, {grid[i][0], grid[i][1], grid[j][0], grid[j][1]}};
      std::size_t k = kStarts - 1;
      while (k > 0 && best[k - 1].value < v) {
        best[k] = best[k - 1];
        --k;
      }
      best[k] = c;
    }
  }

  int evaluations = 0;
  const int share = budget / static_cast<int>(kStarts);
  for (std::size_t k = 0; k < kStarts; ++k) {
    if (best[k].value < 0.0) continue;
    const int allowance = k + 1 == kStarts ? budget - evaluations : share;
    evaluations += refine(f, best[k], allowance);
  }
  const Candidate& top = *std::max_element(best.begin(), best.end(),
                                           [](const Candidate& x, const Candidate& y) { return x.value < y.value; });

  ChshOptimum out;
  out.value = top.value;
  out.evaluations = evaluations;
  out.b = AnalyzerSetting::from_axis(top.p[0], top.p[1]);
  out.b_prime = AnalyzerSetting::from_axis(top.p[2], top.p[3]);
  const BlochVector rb = mat_vec(f.r, bloch(top.p[0], top.p[1]));
  const BlochVector rbp = mat_vec(f.r, bloch(top.p[2], top.p[3]));
  out.a = left_setting({rb[0] + rbp[0], rb[1] + rbp[1], rb[2] + rbp[2]});
  out.a_prime = left_setting({rb[0] - rbp[0], rb[1] - rbp[1], rb[2] - rbp[2]});
  return out;
}

void to_json(nlohmann::json& j, const BellReport& r) {
  j = nlohmann::json{{"u1", r.u1},
                     {"u2", r.u2},
                     {"u3", r.u3},
                     {"emax_closed", r.emax_closed},
                     {"emax_horodecki", r.emax_horodecki},
                     {"violating", r.violating},
                     {"branch", std::string(to_string(r.branch))}};
  j["emax_bruteforce"] = r.emax_bruteforce ? nlohmann::json(*r.emax_bruteforce) : nlohmann::json(nullptr);
}

}  // namespace bellsplit
