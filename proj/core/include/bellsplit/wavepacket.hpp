#pragma once

// Single-photon spectral amplitudes and the temporal indistinguishability
// parameter alpha of two photons detected within a coincidence window.
//
// Conventions: the time-domain amplitude is
//     psi~(t) = (2 pi)^(-1/2) \int d omega psi(omega) e^{i omega t},
// so a packet delayed by t0 carries the spectral phase e^{-i omega t0}.

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

#include "bellsplit/smallmat.hpp"

namespace bellsplit {

struct GaussianShape {
  double center = 0.0;  ///< omega_0 [rad/s]
  double width = 1.0;   ///< sigma_omega [rad/s], std-dev of |psi(omega)|^2
  double delay = 0.0;   ///< t_0 [s]
};

/// Piecewise-linear amplitude through the samples, zero outside the grid.
struct TabulatedShape {
  std::vector<double> omega;
  std::vector<Complex> amplitude;
};

class Wavepacket {
 public:
  /// Normalized Gaussian; throws InvalidInput unless width > 0 and all finite.
  static Wavepacket gaussian(double center, double width, double delay = 0.0);

  /// Normalizes the samples to unit L2 norm and records the applied factor.
  /// Throws InvalidInput for < 2 points, non-increasing omega, or zero norm.
  static Wavepacket tabulated(std::vector<double> omega, std::vector<Complex> amplitude);

  Complex spectral(double omega) const;
  Complex temporal(double t) const;

  /// Interval outside of which the spectral amplitude is (numerically) zero.
  std::pair<double, double> spectral_support() const;
  /// Interval holding the time-domain amplitude; (-inf, inf) for tabulated packets.
  std::pair<double, double> temporal_support() const;

  /// Points where the spectral amplitude is not smooth (tabulated grid nodes).
  std::vector<double> spectral_breakpoints() const;

  /// Factor the raw samples were multiplied by (1 for Gaussians).
  double normalization_factor() const { return factor_; }

  bool is_gaussian() const { return std::holds_alternative<GaussianShape>(shape_); }
  const std::variant<GaussianShape, TabulatedShape>& shape() const { return shape_; }

  /// Characteristic coherence time 1/sigma_omega (Gaussian) or 2 pi / bandwidth (tabulated).
  double coherence_time() const;

  /// The same packet times a global phase e^{i phase}.
  Wavepacket with_phase(double phase) const;

 private:
  explicit Wavepacket(std::variant<GaussianShape, TabulatedShape> shape, double factor = 1.0,
                      Complex global_phase = 1.0)
      : shape_(std::move(shape)), factor_(factor), phase_(global_phase) {}

  std::variant<GaussianShape, TabulatedShape> shape_;
  double factor_ = 1.0;
  Complex phase_{1.0, 0.0};
};

struct OverlapAlpha {
  Complex alpha{};
  double alpha_sq = 0.0;
};

/// alpha = \int d omega phi(omega) psi^*(omega); throws QuadratureNotConverged.
OverlapAlpha alpha_infinite_window(const Wavepacket& psi, const Wavepacket& phi);

/// Window of width tau centred on t:
///   alpha = \int_W phi~ psi~^* / sqrt(\int_W |phi~|^2 \int_W |psi~|^2).
/// Throws InvalidInput for tau <= 0, EmptyWindow when a packet has no weight in W.
OverlapAlpha alpha_finite_window(const Wavepacket& psi, const Wavepacket& phi, double t, double tau);

/// 1 - |alpha|^2.
double temporal_distinguishability(const OverlapAlpha& a);

struct LoadedWavepacket {
  Wavepacket packet;
  double applied_factor = 1.0;
};

/// CSV with header row and columns omega, re, im.
LoadedWavepacket read_wavepacket_csv(std::istream& in);
LoadedWavepacket read_wavepacket_csv(const std::filesystem::path& path);

}  // namespace bellsplit
