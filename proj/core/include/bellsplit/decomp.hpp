#pragma once

// Joint semi-polar decomposition of the gamma pair,
//     gamma2 = U sqrt(xi) V,    gamma1 = U Q sqrt(xi) V,    Q = [[c1, c2], [c3, -c1]] real,
// and the reduced correlation tensor R' = N^T R M built from it.

#include <array>

#include <nlohmann/json.hpp>

#include "bellsplit/scattering.hpp"
#include "bellsplit/smallmat.hpp"

namespace bellsplit {

struct SemiPolar {
  CMat2 u = CMat2::identity();
  CMat2 v = CMat2::identity();
  std::array<double, 2> xi{};  ///< xi1 > xi2 > 0
  double c1 = 0.0;
  double c2 = 0.0;  ///< >= 0 by the choice of phase
  double c3 = 0.0;
  double phase = 0.0;  ///< phi absorbed into U and V

  /// |xi from the trace relations - xi from the singular values of gamma2|.
  double xi_trace_defect = 0.0;
  /// Largest imaginary part discarded when forming c1 and c3.
  double q_imag_defect = 0.0;

  RMat2 q() const { return RMat2{{c1, c2}, {c3, -c1}}; }
  CMat2 sqrt_xi() const;
  CMat2 gamma1() const;
  CMat2 gamma2() const;
};

/// Throws DegenerateXi when xi1 - xi2 <= 1e-10 or xi2 <= 1e-12.
SemiPolar semi_polar(const GammaPair& g);

/// The same constraints derived from X^dagger X = W^dagger Lambda W alone.
struct ConsistencyCheck {
  std::array<double, 2> lambda{};  ///< descending
  CMat2 w;
  std::array<double, 2> xi{};  ///< (Lambda1 (1 - Lambda2), Lambda2 (1 - Lambda1))
  double eta = 0.0;            ///< |W11| = cos eta
  double c1 = 0.0;             ///< cos 2 eta
  double sin_sq_2eta = 0.0;
  double p = 0.0;  ///< A'12 A'21
  double s = 0.0;  ///< A'12^2 + A'21^2
  bool am_gm_holds = true;
  bool solvable = true;
  double a12 = 0.0;  ///< one real solution of the (A'12, A'21) system, a12 >= a21
  double a21 = 0.0;

  double xi_defect = 0.0;    ///< xi vs the closed trace forms of gamma2
  double c1_defect = 0.0;    ///< cos 2 eta vs Tr s_z X^dagger X / (xi1 - xi2); 0 when degenerate
  double norm_defect = 0.0;  ///< s vs Tr g1^dagger g1 - c1^2 (xi1 + xi2)
};

ConsistencyCheck consistency_check(const HybridMatrix& x);

struct RPrime {
  double r11 = 0.0;
  double r13 = 0.0;
  double r22 = 0.0;
  double r31 = 0.0;
  double r33 = 0.0;

  RMat3 matrix() const;
  /// Trace and determinant of the {1,3} block of R'^T R'.
  double block_trace() const;
  double block_det() const;
  /// (u1, u2, u3) with u1 >= u2 from the {1,3} block and u3 = r22^2.
  std::array<double, 3> u() const;
};

/// `n` is the normalization (1+|a|^2) Tr g1^dagger g1 + (1-|a|^2) Tr g2^dagger g2.
RPrime r_prime(const SemiPolar& sp, double alpha_sq, double n);

/// Orthogonal frames with R = left_frame(U) R' right_frame(V)^T.
RMat3 left_frame(const CMat2& u);
RMat3 right_frame(const CMat2& v);

void to_json(nlohmann::json& j, const SemiPolar& sp);
void to_json(nlohmann::json& j, const RPrime& r);
void to_json(nlohmann::json& j, const ConsistencyCheck& c);

}  // namespace bellsplit
