#pragma once

// The balanced slice (X^dagger X)_ii = 1/2 of parameter space, spanned by
// |alpha|^2 and |(X^dagger X)_HV|^2, and its classification into regions where
// the CHSH inequality is violated, where the state is entangled without a
// violation, and where it is separable.
//
// On this slice the u3-branch of E_max is active for hv_sq <= f(alpha_sq), and
// E_max = 2 along hv_sq = g(alpha_sq) <= f(alpha_sq).

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "bellsplit/bell.hpp"
#include "bellsplit/scattering.hpp"
#include "bellsplit/smallmat.hpp"

namespace bellsplit {

/// |a|^2 / (2 (1 + |a|^2)).
double f_boundary(double alpha_sq);

/// (1 - |a|^2 + |a|^4 - (1 - |a|^2) sqrt(1 + |a|^4)) / 4.
double g_boundary(double alpha_sq);

struct BalancedPoint {
  double alpha_sq = 0.0;
  double hv_sq = 0.0;  ///< in [0, 1/4]
};

/// Validates the ranges; throws InvalidInput.
BalancedPoint balanced_point(double alpha_sq, double hv_sq);

/// [[1/2, sqrt(hv_sq) e^{i phase}], [c.c., 1/2]].
CMat2 balanced_gram(const BalancedPoint& p, double phase = 0.0);

/// A unitary S whose hybrid block has the given Gram matrix: X and Y with
/// X^dagger X = G, Y^dagger Y = 1 - G (upper Cholesky factors) fill the
/// columns a_H and b_V; Gram-Schmidt completes the rest.
ScatteringMatrix realize_gram(const CMat2& gram);

enum class Region { violating, entangled_nonviolating, unentangled };
std::string_view to_string(Region r);

struct RegionReport {
  double concurrence = 0.0;
  double emax = 0.0;
  Branch branch = Branch::u3_active;
  Region region = Region::unentangled;
};

Region classify(double concurrence, double emax);

/// a (1 - 4h) / (1 - 4ah) for bosons, a (1 - 4h) / (1 + 4ah) for fermions.
double balanced_concurrence(const BalancedPoint& p, Statistics statistics = Statistics::bosonic);

/// Bosons: 2 (1 - 4h) sqrt(1 + a^2) / (1 - 4ah) for h <= f, else 2 sqrt(u1 + u2).
/// Fermions go through the general closed form.
RegionReport balanced_emax(const BalancedPoint& p, Statistics statistics = Statistics::bosonic);

struct NoMixing {
  double concurrence = 0.0;
  double emax = 0.0;
};

/// Diagonal X^dagger X: C = 2a sqrt(G1 G2 (1-G1)(1-G2)) / (G1 + G2 - 2 G1 G2), E_max = 2 sqrt(1 + C^2).
/// Throws InvalidInput if |(X^dagger X)_HV| > 1e-12.
NoMixing no_mixing_case(const HybridMatrix& x, double alpha_sq);

struct ScanRow {
  double alpha_sq = 0.0;
  double hv_sq = 0.0;
  std::optional<RegionReport> report;  ///< empty where no coincidences survive
  bool near_f = false;
  bool near_g = false;
};

struct ScanResult {
  std::size_t alpha_points = 0;
  std::size_t hv_points = 0;
  Statistics statistics = Statistics::bosonic;
  std::vector<ScanRow> rows;  ///< alpha_sq major, hv_sq minor
  /// E_max = 2 crossings between neighbouring cells that both lie above f.
  std::size_t crossings_above_f = 0;
  /// Largest |C| or |E_max| gap to the Wootters/Horodecki routes on realized S, if checked.
  std::optional<double> cross_check_deviation;
};

struct ScanOptions {
  std::size_t alpha_points = 200;
  std::size_t hv_points = 200;
  Statistics statistics = Statistics::bosonic;
  bool cross_check = false;
};

inline constexpr double kBoundaryBand = 1e-6;

/// Inclusive grid alpha_sq = i/(A-1), hv_sq = j/(4(B-1)). Throws InvalidInput for fewer than 2 points.
ScanResult scan(const ScanOptions& options);

/// Header alpha_sq,hv_sq,concurrence,emax,branch,region; cells within the
/// boundary band of f or g are labelled "boundary", empty cells "none"/"empty".
void write_scan_csv(std::ostream& out, const ScanResult& result);

}  // namespace bellsplit
