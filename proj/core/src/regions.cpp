#include "bellsplit/regions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "bellsplit/errors.hpp"
#include "bellsplit/state.hpp"

namespace bellsplit {

namespace {

constexpr double kZeroCoincidence = 1e-14;

void require_unit(double alpha_sq) {
  if (!std::isfinite(alpha_sq) || alpha_sq < 0.0 || alpha_sq > 1.0)
    throw InvalidInput("|alpha|^2 must lie in [0,1], got " + std::to_string(alpha_sq));
}

// Upper-triangular X with X^dagger X = g.
CMat2 upper_cholesky(const CMat2& g) {
  CMat2 x;
  const double g00 = std::max(0.0, g(0, 0).real());
  x(0, 0) = std::sqrt(g00);
  if (g00 > 0.0) x(0, 1) = g(0, 1) / x(0, 0);
  x(1, 1) = std::sqrt(std::max(0.0, g(1, 1).real() - std::norm(x(0, 1))));
  return x;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double f_boundary(double alpha_sq) {
  require_unit(alpha_sq);
  return alpha_sq / (2.0 * (1.0 + alpha_sq));
}

double g_boundary(double alpha_sq) {
  require_unit(alpha_sq);
  const double a = alpha_sq;
  return 0.25 * (1.0 - a + a * a - (1.0 - a) * std::sqrt(1.0 + a * a));
}

BalancedPoint balanced_point(double alpha_sq, double hv_sq) {
  require_unit(alpha_sq);
  if (!std::isfinite(hv_sq) || hv_sq < 0.0 || hv_sq > 0.25 + 1e-12)
    throw InvalidInput("|(X^dagger X)_HV|^2 must lie in [0,1/4], got " + std::to_string(hv_sq));
  return {alpha_sq, std::min(hv_sq, 0.25)};
}

CMat2 balanced_gram(const BalancedPoint& p, double phase) {
  const Complex off = std::polar(std::sqrt(p.hv_sq), phase);
  return CMat2{{0.5, off}, {std::conj(off), 0.5}};
}

ScatteringMatrix realize_gram(const CMat2& gram) {
  if (hermitian_defect(gram) > 1e-12) throw NotHermitian(hermitian_defect(gram));
  const auto eig = herm_eigen(gram);
  if (eig.values[1] < -1e-12 || eig.values[0] > 1.0 + 1e-12)
    throw InvalidInput("Gram matrix must have eigenvalues in [0,1]");

  const CMat2 x = upper_cholesky(gram);
  const CMat2 y = upper_cholesky(CMat2::identity() - gram);
  CMat4 s;
  for (std::size_t i = 0; i < 2; ++i) {
    s(i, 0) = x(i, 0);
    s(i, 3) = x(i, 1);
    s(i + 2, 0) = y(i, 0);
    s(i + 2, 3) = y(i, 1);
  }
  detail::complete_orthonormal(s, {true, false, false, true});
  return make_scattering(s);
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::violating:
      return "violating";
    case Region::entangled_nonviolating:
      return "entangled_nonviolating";
    case Region::unentangled:
      return "unentangled";
  }
  return "unknown";
}

Region classify(double concurrence, double emax) {
  if (emax > 2.0 + 1e-12) return Region::violating;
  if (concurrence <= 1e-12) return Region::unentangled;
  return Region::entangled_nonviolating;
}

double balanced_concurrence(const BalancedPoint& p, Statistics statistics) {
  const double a = p.alpha_sq;
  const double h = p.hv_sq;
  const double sign = statistics == Statistics::bosonic ? -1.0 : 1.0;
  // Coincidence denominator Tr G - (1+a) Per G - (1-a) Det G = 1/2 -/+ 2ah.
  const double denominator = 0.5 + sign * 2.0 * a * h;
  if (!(denominator > kZeroCoincidence))
    throw ZeroCoincidence("balanced point (" + std::to_string(a) + ", " + std::to_string(h) + ") has no coincidences");
  return std::clamp(a * (1.0 - 4.0 * h) / (1.0 + sign * 4.0 * a * h), 0.0, 1.0);
}

RegionReport balanced_emax(const BalancedPoint& p, Statistics statistics) {
  RegionReport r;
  r.concurrence = balanced_concurrence(p, statistics);
  const double a = p.alpha_sq;
  const double h = p.hv_sq;
  if (statistics == Statistics::bosonic && h <= f_boundary(a)) {
    r.branch = Branch::u3_active;
    r.emax = 2.0 * (1.0 - 4.0 * h) * std::sqrt(1.0 + a * a) / (1.0 - 4.0 * a * h);
  } else {
    const UEigen u = u_eigen_closed(balanced_gram(p), a, statistics);
    if (statistics == Statistics::bosonic) {
      r.branch = Branch::u2_active;
      r.emax = 2.0 * std::sqrt(std::max(0.0, u.u1 + u.u2));
    } else {
      r.branch = u.u3 >= u.u2 ? Branch::u3_active : Branch::u2_active;
      r.emax = 2.0 * std::sqrt(std::max(0.0, u.u1 + std::max(u.u2, u.u3)));
    }
  }
  r.region = classify(r.concurrence, r.emax);
  return r;
}

NoMixing no_mixing_case(const HybridMatrix& x, double alpha_sq) {
  require_unit(alpha_sq);
  if (std::abs(x.gram(0, 1)) > 1e-12)
    throw InvalidInput("no-mixing case needs (X^dagger X)_HV = 0, got |.| = " + std::to_string(std::abs(x.gram(0, 1))));
  const double g1 = x.gram(0, 0).real();
  const double g2 = x.gram(1, 1).real();
  const double denominator = g1 + g2 - 2.0 * g1 * g2;
  NoMixing out;
  if (denominator > kZeroCoincidence) {
    const double num = 2.0 * alpha_sq * std::sqrt(std::max(0.0, g1 * g2 * (1.0 - g1) * (1.0 - g2)));
    out.concurrence = std::clamp(num / denominator, 0.0, 1.0);
  }
  out.emax = 2.0 * std::sqrt(1.0 + out.concurrence * out.concurrence);
  return out;
}

ScanResult scan(const ScanOptions& options) {
  if (options.alpha_points < 2 || options.hv_points < 2)
    throw InvalidInput("scan grid needs at least 2 points per axis");
  ScanResult result;
  result.alpha_points = options.alpha_points;
  result.hv_points = options.hv_points;
  result.statistics = options.statistics;
  result.rows.reserve(options.alpha_points * options.hv_points);
  const bool bosonic = options.statistics == Statistics::bosonic;
  double deviation = 0.0;

  for (std::size_t i = 0; i < options.alpha_points; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(options.alpha_points - 1);
    const double f = f_boundary(a);
    const double g = g_boundary(a);
    for (std::size_t j = 0; j < options.hv_points; ++j) {
      const double h = 0.25 * static_cast<double>(j) / static_cast<double>(options.hv_points - 1);
      ScanRow row;
      row.alpha_sq = a;
      row.hv_sq = h;
      row.near_f = bosonic && std::abs(h - f) <= kBoundaryBand;
      row.near_g = bosonic && std::abs(h - g) <= kBoundaryBand;
      const BalancedPoint p{a, h};
      try {
        row.report = balanced_emax(p, options.statistics);
      } catch (const ZeroCoincidence&) {
      }
      if (row.report && options.cross_check) {
        const ScatteringMatrix s = realize_gram(balanced_gram(p));
        const PolarizationState state = build_rho(gammas(s, options.statistics), a);
        deviation = std::max({deviation, std::abs(row.report->concurrence - concurrence_wootters(state.rho)),
                              std::abs(row.report->emax - emax_horodecki(state.rho))});
      }
      if (bosonic && j > 0 && row.report) {
        const ScanRow& prev = result.rows.back();
        if (prev.report && prev.hv_sq > f + kBoundaryBand &&
            (prev.report->emax - 2.0) * (row.report->emax - 2.0) < 0.0)
          ++result.crossings_above_f;
      }
      result.rows.push_back(row);
    }
  }
  if (options.cross_check) result.cross_check_deviation = deviation;
  return result;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << "alpha_sq,hv_sq,concurrence,emax,branch,region\n";
  for (const ScanRow& row : result.rows) {
    out << format_number(row.alpha_sq) << ',' << format_number(row.hv_sq) << ',';
    if (!row.report) {
      out << "nan,nan,none,empty\n";
      continue;
    }
    const RegionReport& r = *row.report;
    out << format_number(r.concurrence) << ',' << format_number(r.emax) << ','
        << (row.near_f ? std::string_view("boundary") : to_string(r.branch)) << ','
        << (row.near_g ? std::string_view("boundary") : to_string(r.region)) << '\n';
  }
}

}  // namespace bellsplit
