#include "bellsplit/smallmat.hpp"

#include <numbers>

namespace bellsplit {

CMat2 pauli(Axis axis) {
  using namespace std::complex_literals;
  switch (axis) {
    case Axis::x:
      return CMat2{{0.0, 1.0}, {1.0, 0.0}};
    case Axis::y:
      return CMat2{{0.0, -1i}, {1i, 0.0}};
    case Axis::z:
      return CMat2{{1.0, 0.0}, {0.0, -1.0}};
  }
  return CMat2::identity();
}

CMat2 sigma_in() { return CMat2{{0.0, 1.0}, {0.0, 0.0}}; }

CMat2 tilde(const CMat2& g) {
  // sigma_y [[a,b],[c,d]]^* sigma_y = [[d^*, -c^*], [-b^*, a^*]]
  return CMat2{{std::conj(g(1, 1)), -std::conj(g(1, 0))},
               {-std::conj(g(0, 1)), std::conj(g(0, 0))}};
}

CMat4 kron(const CMat2& a, const CMat2& b) {
  CMat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

CVec<4> vec(const CMat2& g) { return {g(0, 0), g(0, 1), g(1, 0), g(1, 1)}; }

CMat4 outer(const CVec<4>& v) {
  CMat4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r(i, j) = v[i] * std::conj(v[j]);
  return r;
}

CMat2 block(const CMat4& m, std::size_t block_row, std::size_t block_col) {
  CMat2 b;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) b(i, j) = m(2 * block_row + i, 2 * block_col + j);
  return b;
}

CMat4 from_blocks(const CMat2& b00, const CMat2& b01, const CMat2& b10, const CMat2& b11) {
  CMat4 m;
  const CMat2* blocks[2][2] = {{&b00, &b01}, {&b10, &b11}};
  for (std::size_t br = 0; br < 2; ++br)
    for (std::size_t bc = 0; bc < 2; ++bc)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(2 * br + i, 2 * bc + j) = (*blocks[br][bc])(i, j);
  return m;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double x = normal();
  const double y = normal();
  return Complex(x, y) * (1.0 / std::numbers::sqrt2);
}

}  // namespace bellsplit
