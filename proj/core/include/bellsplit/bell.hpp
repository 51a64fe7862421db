#pragma once

// Bell-CHSH correlators, the correlation tensor R and its maximal violation.

#include <array>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

#include "bellsplit/scattering.hpp"
#include "bellsplit/smallmat.hpp"

namespace bellsplit {

using BlochVector = std::array<double, 3>;

/// A local polarization mixer. Only the Bloch axis of R^dagger sigma_z R
/// affects correlators; the three angles fix the global phase as well.
struct AnalyzerSetting {
  CMat2 rotation = CMat2::identity();
  std::array<double, 3> angles{};

  /// U3-style parameterization:
  /// [[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]].
  static AnalyzerSetting from_angles(double theta, double phi, double lambda);
  /// Setting whose measured observable R^dagger sigma_z R is n(polar, azimuth) . sigma.
  static AnalyzerSetting from_axis(double polar, double azimuth);

  /// Bloch axis n with R^dagger sigma_z R = n . sigma.
  BlochVector axis() const;
};

/// p_HH, p_HV, p_VH, p_VV after the local rotations.
std::array<double, 4> coincidence_probs(const CMat4& rho, const AnalyzerSetting& left, const AnalyzerSetting& right);

/// E as the ratio of coincidence counts.
double correlator_e(const CMat4& rho, const AnalyzerSetting& left, const AnalyzerSetting& right);

/// E = Tr rho (R_L^dagger s_z R_L) x (R_R^dagger s_z R_R).
double correlator_trace(const CMat4& rho, const AnalyzerSetting& left, const AnalyzerSetting& right);

/// |E(a,b) + E(a',b) + E(a,b') - E(a',b')| with the ratio-form correlator.
double chsh_value(const CMat4& rho, const AnalyzerSetting& a, const AnalyzerSetting& a_prime,
                  const AnalyzerSetting& b, const AnalyzerSetting& b_prime);

/// R_kl = Tr rho sigma_k x sigma_l.
RMat3 correlation_matrix(const CMat4& rho);

/// R_kl from the gamma pair: [(1+|a|^2) Tr g1^dag s_k g1 s_l^T + (1-|a|^2) Tr g2^dag s_k g2 s_l^T] / N.
RMat3 correlation_matrix_gamma(const GammaPair& g, double alpha_sq);

/// Descending eigenvalues of R^T R.
std::array<double, 3> rtr_spectrum(const RMat3& r);

struct UEigen {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
};

/// Closed-form eigenvalues of R^T R from X^dagger X and |alpha|^2. Throws ZeroCoincidence.
UEigen u_eigen_closed(const CMat2& gram, double alpha_sq, Statistics statistics = Statistics::bosonic);
UEigen u_eigen_closed(const HybridMatrix& x, double alpha_sq, Statistics statistics = Statistics::bosonic);

enum class Branch { u3_active, u2_active };
std::string_view to_string(Branch b);

struct BellReport {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  double emax_closed = 0.0;
  double emax_horodecki = 0.0;
  std::optional<double> emax_bruteforce;
  bool violating = false;
  Branch branch = Branch::u3_active;
};

/// 2 sqrt(u1 + max(u2, u3)) from the closed-form u's; horodecki fields left at 0.
BellReport emax_closed(const CMat2& gram, double alpha_sq, Statistics statistics = Statistics::bosonic);

/// 2 sqrt(sum of the two largest eigenvalues of R^T R), numerically.
double emax_horodecki(const CMat4& rho);

inline constexpr int kDefaultChshBudget = 20000;
inline constexpr int kMinChshBudget = 1000;

/// Full report for a splitter: closed form, Horodecki and (optionally) brute force.
BellReport emax(const ScatteringMatrix& s, double alpha_sq, Statistics statistics = Statistics::bosonic,
                std::optional<int> bruteforce_budget = std::nullopt);

struct ChshOptimum {
  double value = 0.0;
  AnalyzerSetting a, a_prime, b, b_prime;
  int evaluations = 0;
};

/// Maximizes the CHSH combination over analyzer settings. Right-hand axis pairs
/// are scored on a 12x24 polar/azimuth grid with the left pair maximized exactly
/// for each; the best three pairs seed a compass search. `budget` caps
/// refinement evaluations (>= kMinChshBudget).
ChshOptimum chsh_bruteforce(const CMat4& rho, int budget = kDefaultChshBudget);

void to_json(nlohmann::json& j, const BellReport& r);

}  // namespace bellsplit
