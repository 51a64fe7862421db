#include "bellsplit/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellsplit/errors.hpp"

namespace bellsplit {

namespace {

constexpr Axis kAxes[3] = {Axis::x, Axis::y, Axis::z};

CMat2 phase_diag(double phi) { return CMat2::diagonal({std::polar(1.0, 0.5 * phi), std::polar(1.0, -0.5 * phi)}); }

}  // namespace

CMat2 SemiPolar::sqrt_xi() const { return CMat2::diagonal({std::sqrt(xi[0]), std::sqrt(xi[1])}); }

CMat2 SemiPolar::gamma1() const { return u * to_complex(q()) * sqrt_xi() * v; }

CMat2 SemiPolar::gamma2() const { return u * sqrt_xi() * v; }

SemiPolar semi_polar(const GammaPair& g) {
  const Svd<2> d = svd(g.gamma2);
  SemiPolar sp;
  sp.xi = {d.s[0] * d.s[0], d.s[1] * d.s[1]};
  if (!(sp.xi[0] - sp.xi[1] > 1e-10) || !(sp.xi[1] > 1e-12))
    throw DegenerateXi("xi1 = " + std::to_string(sp.xi[0]) + ", xi2 = " + std::to_string(sp.xi[1]) +
                       ": semi-polar decomposition is not unique");

  // xi1 + xi2 = Tr g2^dag g2, 2 sqrt(xi1 xi2) = |Tr g2^dag g2~|.
  const double sum = inner(g.gamma2, g.gamma2).real();
  const double prod = 0.5 * std::abs(inner(g.gamma2, tilde(g.gamma2)));
  const double root = std::sqrt(std::max(0.0, 0.25 * sum * sum - prod * prod));
  const double xi1 = 0.5 * sum + root;
  const double xi2 = xi1 > 0.0 ? prod * prod / xi1 : 0.0;
  sp.xi_trace_defect = std::max(std::abs(xi1 - sp.xi[0]), std::abs(xi2 - sp.xi[1]));

  const Complex overlap = inner(g.gamma1, g.gamma2);
  sp.c1 = overlap.real() / (sp.xi[0] - sp.xi[1]);

  const CMat2 a = adjoint(d.u) * g.gamma1 * adjoint(d.v);
  if (std::abs(a(0, 1)) > 1e-14)
    sp.phase = std::arg(a(0, 1));
  else if (std::abs(a(1, 0)) > 1e-14)
    sp.phase = -std::arg(a(1, 0));
  const Complex a12 = a(0, 1) * std::polar(1.0, -sp.phase);
  const Complex a21 = a(1, 0) * std::polar(1.0, sp.phase);
  sp.c2 = std::max(0.0, a12.real()) / std::sqrt(sp.xi[1]);
  sp.c3 = a21.real() / std::sqrt(sp.xi[0]);
  sp.q_imag_defect = std::max(std::abs(overlap.imag()) / (sp.xi[0] - sp.xi[1]), std::abs(a21.imag()));

  sp.u = d.u * phase_diag(sp.phase);
  sp.v = adjoint(phase_diag(sp.phase)) * d.v;
  return sp;
}

ConsistencyCheck consistency_check(const HybridMatrix& x) {
  const CMat2& gram = x.gram;
  const auto eig = herm_eigen(gram);
  ConsistencyCheck c;
  c.lambda = eig.values;
  c.w = adjoint(eig.vectors);
  const double l1 = c.lambda[0];
  const double l2 = c.lambda[1];
  c.xi = {l1 * (1.0 - l2), l2 * (1.0 - l1)};

  const double det = determinant(gram).real();
  const double det_c = determinant(CMat2::identity() - gram).real();
  const double tr = trace(gram).real();
  const double xi_sum = tr - 2.0 * det;
  const double xi_prod = std::sqrt(std::max(0.0, det * det_c));
  c.xi_defect = std::max(std::abs(c.xi[0] + c.xi[1] - xi_sum), std::abs(std::sqrt(std::max(0.0, c.xi[0] * c.xi[1])) - xi_prod));

  c.eta = std::acos(std::min(1.0, std::abs(c.w(0, 0))));
  c.c1 = std::cos(2.0 * c.eta);
  c.sin_sq_2eta = std::pow(std::sin(2.0 * c.eta), 2);
  const double gap = c.xi[0] - c.xi[1];
  if (gap > 1e-10) {
    const double tr_sz = (gram(0, 0) - gram(1, 1)).real();
    c.c1_defect = std::abs(c.c1 - tr_sz / gap);
  }

  const double geo = std::sqrt(std::max(0.0, l1 * l2 * (1.0 - l1) * (1.0 - l2)));
  const double arith = l1 * (1.0 - l1) + l2 * (1.0 - l2);
  c.am_gm_holds = 2.0 * geo <= arith + 1e-12;
  c.p = c.sin_sq_2eta * geo;
  c.s = c.sin_sq_2eta * arith;
  const double norm1 = tr - 2.0 * permanent(gram).real();
  c.norm_defect = std::abs(c.s - (norm1 - c.c1 * c.c1 * xi_sum));

  // a12 a21 = p, a12^2 + a21^2 = s.
  const double plus = c.s + 2.0 * c.p;
  const double minus = c.s - 2.0 * c.p;
  c.solvable = plus >= -1e-12 && minus >= -1e-12;
  c.a12 = 0.5 * (std::sqrt(std::max(0.0, plus)) + std::sqrt(std::max(0.0, minus)));
  c.a21 = 0.5 * (std::sqrt(std::max(0.0, plus)) - std::sqrt(std::max(0.0, minus)));
  return c;
}

RMat3 RPrime::matrix() const { return RMat3{{r11, 0.0, r13}, {0.0, r22, 0.0}, {r31, 0.0, r33}}; }

double RPrime::block_trace() const { return r11 * r11 + r13 * r13 + r31 * r31 + r33 * r33; }

double RPrime::block_det() const {
  const double d = r11 * r33 - r13 * r31;
  return d * d;
}

std::array<double, 3> RPrime::u() const {
  const double t = block_trace();
  const double root = std::sqrt(std::max(0.0, t * t - 4.0 * block_det()));
  return {0.5 * (t + root), 0.5 * (t - root), r22 * r22};
}

RPrime r_prime(const SemiPolar& sp, double alpha_sq, double n) {
  const double a = alpha_sq;
  const double c1 = sp.c1;
  const double c2 = sp.c2;
  const double c3 = sp.c3;
  const double xi1 = sp.xi[0];
  const double xi2 = sp.xi[1];
  const double q = std::sqrt(xi1 * xi2);
  RPrime r;
  r.r11 = 2.0 / n * (1.0 - a - (1.0 + a) * (c1 * c1 - c2 * c3)) * q;
  r.r13 = 2.0 / n * (1.0 + a) * c1 * (c2 * xi2 + c3 * xi1);
  r.r22 = 2.0 / n * (-1.0 + a + (1.0 + a) * (c1 * c1 + c2 * c3)) * q;
  r.r31 = 2.0 / n * (1.0 + a) * c1 * (c2 + c3) * q;
  r.r33 = ((1.0 - a) + (1.0 + a) * c1 * c1) * (xi1 + xi2) / n - (1.0 + a) * (c2 * c2 * xi2 + c3 * c3 * xi1) / n;
  return r;
}

RMat3 left_frame(const CMat2& u) {
  RMat3 o;
  for (std::size_t k = 0; k < 3; ++k) {
    const CMat2 rotated = adjoint(u) * pauli(kAxes[k]) * u;
    for (std::size_t i = 0; i < 3; ++i) o(k, i) = 0.5 * trace(pauli(kAxes[i]) * rotated).real();
  }
  return o;
}

RMat3 right_frame(const CMat2& v) {
  RMat3 p;
  for (std::size_t l = 0; l < 3; ++l) {
    const CMat2 rotated = v * transpose(pauli(kAxes[l])) * adjoint(v);
    for (std::size_t j = 0; j < 3; ++j) p(l, j) = 0.5 * trace(transpose(pauli(kAxes[j])) * rotated).real();
  }
  return p;
}

void to_json(nlohmann::json& j, const SemiPolar& sp) {
  j = nlohmann::json{{"format", "debug-v1"},
                     {"u", matrix_to_json(sp.u)},
                     {"v", matrix_to_json(sp.v)},
                     {"xi", sp.xi},
                     {"c1", sp.c1},
                     {"c2", sp.c2},
                     {"c3", sp.c3},
                     {"phase", sp.phase},
                     {"xi_trace_defect", sp.xi_trace_defect},
                     {"q_imag_defect", sp.q_imag_defect}};
}

void to_json(nlohmann::json& j, const RPrime& r) {
  j = nlohmann::json{{"format", "debug-v1"}, {"r11", r.r11}, {"r13", r.r13}, {"r22", r.r22},
                     {"r31", r.r31},         {"r33", r.r33}, {"u", r.u()}};
}

void to_json(nlohmann::json& j, const ConsistencyCheck& c) {
  j = nlohmann::json{{"format", "debug-v1"},     {"lambda", c.lambda},       {"xi", c.xi},
                     {"eta", c.eta},             {"c1", c.c1},               {"p", c.p},
                     {"s", c.s},                 {"am_gm_holds", c.am_gm_holds},
                     {"solvable", c.solvable},   {"a12", c.a12},             {"a21", c.a21},
                     {"xi_defect", c.xi_defect}, {"c1_defect", c.c1_defect}, {"norm_defect", c.norm_defect}};
}

}  // namespace bellsplit
