#include "bellsplit/scattering.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "bellsplit/errors.hpp"

namespace bellsplit {

using namespace std::complex_literals;

std::string_view to_string(Statistics s) {
  return s == Statistics::bosonic ? "bosonic" : "fermionic";
}

Statistics statistics_from_string(std::string_view name) {
  if (name == "bosonic") return Statistics::bosonic;
  if (name == "fermionic") return Statistics::fermionic;
  throw InvalidInput("statistics must be 'bosonic' or 'fermionic', got '" + std::string(name) + "'");
}

ScatteringMatrix ScatteringMatrix::make(const CMat4& s, double tol) {
  if (!s.all_finite()) throw InvalidInput("scattering matrix has non-finite entries");
  const double defect = bellsplit::unitarity_defect(s);
  if (defect > tol) throw NotUnitary(defect);
  ScatteringMatrix out;
  out.s_ = s;
  out.r_ = block(s, 0, 0);
  out.tp_ = block(s, 0, 1);
  out.t_ = block(s, 1, 0);
  out.rp_ = block(s, 1, 1);
  out.defect_ = defect;
  return out;
}

ScatteringMatrix make_scattering(const CMat4& s, double tol) { return ScatteringMatrix::make(s, tol); }

HybridMatrix hybrid(const ScatteringMatrix& s) {
  const CMat2& r = s.r();
  const CMat2& tp = s.t_prime();
  HybridMatrix h;
  h.x = CMat2{{r(0, 0), tp(0, 1)}, {r(1, 0), tp(1, 1)}};
  h.gram = adjoint(h.x) * h.x;
  return h;
}

GammaPair gammas(const ScatteringMatrix& s, Statistics statistics) {
  const CMat2 sin = sigma_in();
  const CMat2 reflected = s.r() * sin * transpose(s.r_prime());
  const CMat2 transmitted = s.t_prime() * transpose(sin) * transpose(s.t());
  GammaPair g;
  g.gamma1 = reflected + transmitted;
  g.gamma2 = reflected - transmitted;
  g.statistics = statistics;
  if (statistics == Statistics::fermionic) std::swap(g.gamma1, g.gamma2);
  return g;
}

GammaTraces gamma_traces_closed(const CMat2& gram, Statistics statistics) {
  const CMat2 complement = CMat2::identity() - gram;
  const double det = determinant(gram).real();
  const double det_c = determinant(complement).real();
  const double tr = trace(gram).real();
  const double per = permanent(gram).real();

  GammaTraces t;
  t.tilde_abs = 2.0 * std::sqrt(std::max(0.0, det) * std::max(0.0, det_c));
  t.norm1 = tr - 2.0 * per;
  t.norm2 = tr - 2.0 * det;
  t.inner = (gram(0, 0) - gram(1, 1)).real();
  if (statistics == Statistics::fermionic) std::swap(t.norm1, t.norm2);
  return t;
}

GammaTraces gamma_traces_direct(const GammaPair& g) {
  GammaTraces t;
  t.tilde_abs = std::abs(inner(g.gamma1, tilde(g.gamma1)));
  t.norm1 = inner(g.gamma1, g.gamma1).real();
  t.norm2 = inner(g.gamma2, g.gamma2).real();
  t.inner = inner(g.gamma1, g.gamma2).real();
  return t;
}

double TraceIdentities::max_defect() const {
  double m = std::max({abs_tr_g1tg1.defect(), tr_g1g1.defect(), tr_g2g2.defect(), tr_g1g2.defect()});
  return std::max({m, std::abs(tilde_sum), std::abs(tilde_cross12), std::abs(tilde_cross21)});
}

TraceIdentities trace_identities(const ScatteringMatrix& s) {
  const GammaPair g = gammas(s, Statistics::bosonic);
  const GammaTraces closed = gamma_traces_closed(hybrid(s).gram, Statistics::bosonic);

  TraceIdentities out;
  out.abs_tr_g1tg1 = {closed.tilde_abs, std::abs(inner(g.gamma1, tilde(g.gamma1)))};
  out.tr_g1g1 = {closed.norm1, inner(g.gamma1, g.gamma1)};
  out.tr_g2g2 = {closed.norm2, inner(g.gamma2, g.gamma2)};
  out.tr_g1g2 = {closed.inner, inner(g.gamma1, g.gamma2)};
  out.tilde_sum = inner(g.gamma1, tilde(g.gamma1)) + inner(g.gamma2, tilde(g.gamma2));
  out.tilde_cross12 = inner(g.gamma1, tilde(g.gamma2));
  out.tilde_cross21 = inner(g.gamma2, tilde(g.gamma1));
  return out;
}

CMat4 assemble_polar(const CMat2& k_out, const CMat2& l_out, const CMat2& k_in, const CMat2& l_in,
                     const std::array<double, 2>& transmission) {
  const CMat2 refl = CMat2::diagonal({std::sqrt(1.0 - transmission[0]), std::sqrt(1.0 - transmission[1])});
  const CMat2 trans = CMat2::diagonal({1i * std::sqrt(transmission[0]), 1i * std::sqrt(transmission[1])});
  const CMat2 zero;
  const CMat4 left = from_blocks(k_out, zero, zero, l_out);
  const CMat4 middle = from_blocks(refl, trans, trans, refl);
  const CMat4 right = from_blocks(k_in, zero, zero, l_in);
  return left * middle * right;
}

CMat4 PolarDecomposition::reassemble() const {
  return assemble_polar(k_out, l_out, k_in, l_in, transmission);
}

PolarDecomposition polar_decompose_s(const ScatteringMatrix& s, double tol) {
  // t = L' (i sqrt T) K with T ascending.
  const Svd<2> sv = svd2(s.t());
  const CMat2 swap{{0.0, 1.0}, {1.0, 0.0}};
  const std::array<double, 2> root_t{sv.s[1], sv.s[0]};
  const std::array<double, 2> transmission{root_t[0] * root_t[0], root_t[1] * root_t[1]};

  if (std::abs(transmission[0] - transmission[1]) < tol)
    throw DegenerateTransmission("transmission eigenvalues coincide (T_H = " +
                                 std::to_string(transmission[0]) + ", T_V = " +
                                 std::to_string(transmission[1]) + ")");
  if (transmission[0] < tol || transmission[1] > 1.0 - tol)
    throw DegenerateTransmission("transmission eigenvalue outside (0,1) (T_H = " +
                                 std::to_string(transmission[0]) + ", T_V = " +
                                 std::to_string(transmission[1]) + ")");

  PolarDecomposition p;
  p.transmission = transmission;
  p.l_out = sv.u * swap;
  p.k_in = -1i * (swap * sv.v);

  const CMat2 inv_refl =
      CMat2::diagonal({1.0 / std::sqrt(1.0 - transmission[0]), 1.0 / std::sqrt(1.0 - transmission[1])});
  const CMat2 inv_trans = CMat2::diagonal({-1i / root_t[0], -1i / root_t[1]});
  p.k_out = s.r() * adjoint(p.k_in) * inv_refl;
  p.l_in = inv_trans * adjoint(p.k_out) * s.t_prime();
  return p;
}

CMat4 outgoing_matrix(const ScatteringMatrix& s, const CMat2& sigma) {
  const CMat2 rs = s.r() * sigma;
  const CMat2 ts = s.t() * sigma;
  return from_blocks(rs * transpose(s.t_prime()), rs * transpose(s.r_prime()),
                     ts * transpose(s.t_prime()), ts * transpose(s.r_prime()));
}

CanonicalInput canonicalize_input(const ScatteringMatrix& s, const CMat2& sigma_general, double tol) {
  const Svd<2> sv = svd2(sigma_general);
  if (sv.s[0] <= tol) throw NotRankOne("input polarization matrix is zero");
  const double det = std::abs(determinant(sigma_general));
  if (det > tol * std::max(1.0, sv.s[0] * sv.s[0]))
    throw NotRankOne("input polarization matrix has Det = " + std::to_string(det) +
                     " (photons entangled before scattering)");

  // sigma = s1 u v^T with the phase of v's dominant entry moved onto u.
  CVec<2> u{sv.u(0, 0), sv.u(1, 0)};
  CVec<2> v{sv.v(0, 0), sv.v(0, 1)};
  const std::size_t dominant = std::abs(v[1]) > std::abs(v[0]) ? 1 : 0;
  const Complex phase = v[dominant] / std::abs(v[dominant]);
  for (auto& x : v) x *= std::conj(phase);
  for (auto& x : u) x *= phase;

  const CMat2 k2{{u[0], -std::conj(u[1])}, {u[1], std::conj(u[0])}};
  const CMat2 l2{{std::conj(v[1]), v[0]}, {-std::conj(v[0]), v[1]}};
  const CMat2 zero;
  const CMat4 rotated = s.matrix() * from_blocks(k2, zero, zero, l2);

  return CanonicalInput{ScatteringMatrix::make(rotated, 1e-9), k2, l2, sv.s[0]};
}

CMat4 identity_splitter() { return CMat4::identity(); }

CMat4 balanced_pc_splitter() {
  const double h = (1.0 / std::numbers::sqrt2);
  const CMat2 refl = h * CMat2::identity();
  const CMat2 trans = (1i * h) * CMat2::identity();
  return from_blocks(refl, trans, trans, refl);
}

CMat4 balanced_mixing_splitter(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const CMat2 rotation{{c, -s}, {s, c}};
  return balanced_pc_splitter() * from_blocks(rotation, CMat2{}, CMat2{}, CMat2::identity());
}

ScatteringMatrix scattering_preset(std::string_view name) {
  if (name == "identity") return ScatteringMatrix::make(identity_splitter());
  if (name == "balanced_pc") return ScatteringMatrix::make(balanced_pc_splitter());

  constexpr std::string_view prefix = "balanced_mixing(";
  if (name.starts_with(prefix) && name.ends_with(")")) {
    const std::string_view arg = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    double theta = 0.0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), theta);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || !std::isfinite(theta))
      throw InvalidInput("balanced_mixing needs a numeric angle, got '" + std::string(arg) + "'");
    return ScatteringMatrix::make(balanced_mixing_splitter(theta));
  }
  throw InvalidInput("unknown scattering preset '" + std::string(name) +
                     "' (expected identity, balanced_pc or balanced_mixing(theta))");
}

}  // namespace bellsplit
