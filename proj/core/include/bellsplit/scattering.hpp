#pragma once

// Lossless two-port, two-polarization beam splitter.
//
// The 4x4 scattering matrix acts on (a_H, a_V, b_H, b_V) and is laid out as
//
//     S = | r   t' |      c = r a + t' b   (left outputs)
//         | t   r' |      d = t a + r' b   (right outputs)
//
// Worked example (balanced polarization-conserving splitter):
//
//     S = 1/sqrt(2) * | 1 0 i 0 |
//                     | 0 1 0 i |
//                     | i 0 1 0 |
//                     | 0 i 0 1 |
//
// so r = r' = 1/sqrt(2), t = t' = i/sqrt(2) (times the 2x2 identity).

#include <array>
#include <string_view>

#include <nlohmann/json.hpp>

#include "bellsplit/smallmat.hpp"

namespace bellsplit {

enum class Statistics { bosonic, fermionic };

std::string_view to_string(Statistics s);
Statistics statistics_from_string(std::string_view name);

class ScatteringMatrix {
 public:
  /// Validates unitarity (max|S^dagger S - 1| <= tol); throws NotUnitary.
  static ScatteringMatrix make(const CMat4& s, double tol = 1e-10);

  const CMat4& matrix() const { return s_; }
  const CMat2& r() const { return r_; }
  const CMat2& t() const { return t_; }
  const CMat2& t_prime() const { return tp_; }
  const CMat2& r_prime() const { return rp_; }
  double unitarity_defect() const { return defect_; }

 private:
  ScatteringMatrix() = default;

  CMat4 s_;
  CMat2 r_, t_, tp_, rp_;
  double defect_ = 0.0;
};

ScatteringMatrix make_scattering(const CMat4& s, double tol = 1e-10);

/// X = [[r_HH, t'_HV], [r_VH, t'_VV]] and its Gram matrix X^dagger X.
struct HybridMatrix {
  CMat2 x;
  CMat2 gram;
};

HybridMatrix hybrid(const ScatteringMatrix& s);

struct GammaPair {
  CMat2 gamma1;
  CMat2 gamma2;
  Statistics statistics = Statistics::bosonic;
};

/// gamma1 = r s_in r'^T + t' s_in^T t^T, gamma2 = r s_in r'^T - t' s_in^T t^T,
/// interchanged for fermions.
GammaPair gammas(const ScatteringMatrix& s, Statistics statistics = Statistics::bosonic);

/// The four traces every closed form is built from.
struct GammaTraces {
  double tilde_abs = 0.0;  ///< |Tr g1^dagger g1~|
  double norm1 = 0.0;      ///< Tr g1^dagger g1
  double norm2 = 0.0;      ///< Tr g2^dagger g2
  double inner = 0.0;      ///< Tr g1^dagger g2 (real)
};

/// Traces expressed through X^dagger X only (unitarity of S assumed).
GammaTraces gamma_traces_closed(const CMat2& gram, Statistics statistics = Statistics::bosonic);

/// Same traces evaluated directly from the gamma matrices; `inner` keeps the real part.
GammaTraces gamma_traces_direct(const GammaPair& g);

struct TraceCheck {
  double closed = 0.0;
  Complex direct{};
  double defect() const { return std::abs(direct - closed); }
};

struct TraceIdentities {
  TraceCheck abs_tr_g1tg1;  ///< |Tr g1^dagger g1~| = 2 sqrt(Det X^dagger X Det(1 - X^dagger X))
  TraceCheck tr_g1g1;       ///< Tr X^dagger X - 2 Per X^dagger X
  TraceCheck tr_g2g2;       ///< Tr X^dagger X - 2 Det X^dagger X
  TraceCheck tr_g1g2;       ///< Tr sigma_z X^dagger X
  Complex tilde_sum{};      ///< Tr g1^dagger g1~ + Tr g2^dagger g2~  (should vanish)
  Complex tilde_cross12{};  ///< Tr g1^dagger g2~ (should vanish)
  Complex tilde_cross21{};  ///< Tr g2^dagger g1~ (should vanish)

  double max_defect() const;
};

TraceIdentities trace_identities(const ScatteringMatrix& s);

/// S = diag(K', L') [[sqrt(1-T), i sqrt(T)], [i sqrt(T), sqrt(1-T)]] diag(K, L).
struct PolarDecomposition {
  CMat2 k_out;  ///< K'
  CMat2 l_out;  ///< L'
  CMat2 k_in;   ///< K
  CMat2 l_in;   ///< L
  std::array<double, 2> transmission{};  ///< (T_H, T_V), ascending

  CMat4 reassemble() const;
};

/// Throws DegenerateTransmission when T_H ~ T_V or a T_i touches 0 or 1.
PolarDecomposition polar_decompose_s(const ScatteringMatrix& s, double tol = 1e-10);

/// Assembles S from polar factors (inverse of polar_decompose_s).
CMat4 assemble_polar(const CMat2& k_out, const CMat2& l_out, const CMat2& k_in, const CMat2& l_in,
                     const std::array<double, 2>& transmission);

/// Blocks (r s t'^T, r s r'^T; t s t'^T, t s r'^T) of the outgoing two-photon amplitude.
CMat4 outgoing_matrix(const ScatteringMatrix& s, const CMat2& sigma);

struct CanonicalInput {
  ScatteringMatrix scattering;  ///< S' = S diag(K2, L2)
  CMat2 k2;
  CMat2 l2;
  double scale = 1.0;  ///< sigma_general = scale * K2 sigma_in L2^T
};

/// Rewrites a rank-1 input polarization as sigma_in scattered by a modified S.
/// outgoing_matrix(S', sigma_in) * scale == outgoing_matrix(S, sigma_general).
CanonicalInput canonicalize_input(const ScatteringMatrix& s, const CMat2& sigma_general,
                                  double tol = 1e-10);

// Presets.
CMat4 identity_splitter();
/// 50/50 polarization-conserving splitter (see header comment).
CMat4 balanced_pc_splitter();
/// balanced_pc with a polarization rotation by theta in the left input arm;
/// |(X^dagger X)_HV|^2 = sin^2(theta)/4.
CMat4 balanced_mixing_splitter(double theta);

/// "identity", "balanced_pc" or "balanced_mixing(<theta>)"; throws InvalidInput.
ScatteringMatrix scattering_preset(std::string_view name);

}  // namespace bellsplit
