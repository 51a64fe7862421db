#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bellsplit/scattering.hpp"
#include "bellsplit/smallmat.hpp"

namespace testing_support {

using bellsplit::CMat2;
using bellsplit::CMat4;
using bellsplit::Complex;

// splitmix64: independent of the library RNG so test inputs do not share its bugs.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex() { return {normal(), normal()}; }

  template <std::size_t N>
  bellsplit::CMat<N> matrix() {
    bellsplit::CMat<N> m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = complex();
    return m;
  }

  template <std::size_t N>
  bellsplit::CMat<N> hermitian() {
    const auto m = matrix<N>();
    return 0.5 * (m + bellsplit::adjoint(m));
  }

  /// Random unitary from the library's Haar sampler, seeded from this stream.
  template <std::size_t N>
  bellsplit::CMat<N> unitary() {
    return bellsplit::haar_unitary<N>(next());
  }

  bellsplit::ScatteringMatrix splitter() { return bellsplit::make_scattering(unitary<4>()); }

  /// Rank-1 2x2 matrix u v^T.
  CMat2 rank_one() {
    const Complex u0 = complex(), u1 = complex(), v0 = complex(), v1 = complex();
    return CMat2{{u0 * v0, u0 * v1}, {u1 * v0, u1 * v1}};
  }

 private:
  std::uint64_t state_;
};

inline constexpr double kAlphaLadder[] = {0.0, 0.25, 0.5, 0.75, 1.0};

}  // namespace testing_support
