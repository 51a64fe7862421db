#pragma once

// Postselected two-photon polarization state and its concurrence.

#include <nlohmann/json.hpp>

#include "bellsplit/scattering.hpp"
#include "bellsplit/smallmat.hpp"

namespace bellsplit {

/// rho indexed by (ij, mn) in the (HH, HV, VH, VV) basis; first index = left photon.
struct PolarizationState {
  CMat4 rho;
  GammaPair source;
  double alpha_sq = 0.0;
  double normalization = 0.0;  ///< N = (1+|a|^2) Tr g1^dagger g1 + (1-|a|^2) Tr g2^dagger g2
};

/// rho = [(1+|a|^2) vec(g1) vec(g1)^dagger + (1-|a|^2) vec(g2) vec(g2)^dagger] / N.
/// Throws InvalidInput for alpha_sq outside [0,1], ZeroCoincidence when N/2 <= 1e-14.
PolarizationState build_rho(const GammaPair& g, double alpha_sq);

/// Health of a density matrix, for invariant checks.
struct StateDiagnostics {
  double hermitian_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  double third_eigenvalue = 0.0;  ///< rank <= 2 means this is ~0
};

StateDiagnostics diagnose(const CMat4& rho);

/// Closed form in X^dagger X:
///   C = 2|a|^2 sqrt(Det G Det(1-G)) / (Tr G - (1+|a|^2) Per G - (1-|a|^2) Det G)
/// (Per and Det interchanged for fermions). Throws ZeroCoincidence.
double concurrence_closed(const CMat2& gram, double alpha_sq, Statistics statistics = Statistics::bosonic);
double concurrence_closed(const HybridMatrix& x, double alpha_sq, Statistics statistics = Statistics::bosonic);

/// Intermediate form 2|a|^2 |Tr g1^dagger g1~| / N.
double concurrence_gamma(const GammaPair& g, double alpha_sq);

/// Wootters concurrence of an arbitrary two-qubit density matrix.
double concurrence_wootters(const CMat4& rho);
double concurrence_wootters(const PolarizationState& state);

/// Descending eigenvalues of rho rho~ via the singular values of
/// sqrt(rho) (sy x sy) sqrt(rho)^*.
std::array<double, 4> wootters_spectrum(const CMat4& rho);

struct MandelDip {
  double dip = 0.0;               ///< -2|a|^2 |G_HV|^2 (sign flips for fermions)
  double classical_prob = 0.0;    ///< G_HH + G_VV - 2 G_HH G_VV
  double coincidence_prob = 0.0;  ///< classical_prob + dip
};

MandelDip mandel_dip(const CMat2& gram, double alpha_sq, Statistics statistics = Statistics::bosonic);
MandelDip mandel_dip(const HybridMatrix& x, double alpha_sq, Statistics statistics = Statistics::bosonic);

struct ConcurrenceReport {
  double c_closed = 0.0;
  double c_gamma = 0.0;
  double c_wootters = 0.0;
  MandelDip mandel;
  double coincidence_prob = 0.0;

  double max_route_gap() const;
};

ConcurrenceReport concurrence_report(const ScatteringMatrix& s, double alpha_sq,
                                     Statistics statistics = Statistics::bosonic);

void to_json(nlohmann::json& j, const PolarizationState& state);
void to_json(nlohmann::json& j, const MandelDip& m);
void to_json(nlohmann::json& j, const ConcurrenceReport& r);

}  // namespace bellsplit
