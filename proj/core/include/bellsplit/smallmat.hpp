#pragma once

// Fixed-size dense matrices for the 2x2, 3x3 and 4x4 objects of two-photon
// polarization optics, with the handful of decompositions the library needs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <span>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "bellsplit/errors.hpp"

namespace bellsplit {

using Complex = std::complex<double>;

namespace detail {
template <typename T>
inline double abs_value(const T& v) {
  return std::abs(v);
}
template <typename T>
inline T conj_value(const T& v) {
  if constexpr (std::is_same_v<T, Complex>) {
    return std::conj(v);
  } else {
    return v;
  }
}
}  // namespace detail

/// Row-major N x N matrix with value semantics. Default-constructed as zero.
template <typename T, std::size_t N>
class Matrix {
 public:
  using value_type = T;
  static constexpr std::size_t kDim = N;

  constexpr Matrix() = default;

  /// Nested-brace construction, e.g. CMat2{{a, b}, {c, d}}.
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    if (rows.size() != N) throw InvalidInput("matrix initializer has wrong row count");
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != N) throw InvalidInput("matrix initializer has wrong column count");
      std::size_t j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const std::array<T, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  /// Builds from row-major values; rejects non-finite entries.
  static Matrix from_row_major(std::span<const T> values) {
    if (values.size() != N * N) throw InvalidInput("row-major data has wrong length");
    Matrix m;
    std::copy(values.begin(), values.end(), m.data_.begin());
    if (!m.all_finite()) throw InvalidInput("matrix has non-finite entries");
    return m;
  }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * N + j]; }

  std::span<const T, N * N> values() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& v) {
      if constexpr (std::is_same_v<T, Complex>) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
      } else {
        return std::isfinite(v);
      }
    });
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const T aik = a(i, k);
        for (std::size_t j = 0; j < N; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::array<T, N * N> data_{};
};

using CMat2 = Matrix<Complex, 2>;
using CMat3 = Matrix<Complex, 3>;
using CMat4 = Matrix<Complex, 4>;
using RMat2 = Matrix<double, 2>;
using RMat3 = Matrix<double, 3>;

template <std::size_t N>
using CMat = Matrix<Complex, N>;

template <std::size_t N>
using CVec = std::array<Complex, N>;

template <typename T, std::size_t N>
Matrix<T, N> transpose(const Matrix<T, N>& a) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = a(j, i);
  return r;
}

template <typename T, std::size_t N>
Matrix<T, N> conj(const Matrix<T, N>& a) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = detail::conj_value(a(i, j));
  return r;
}

template <typename T, std::size_t N>
Matrix<T, N> adjoint(const Matrix<T, N>& a) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = detail::conj_value(a(j, i));
  return r;
}

template <typename T, std::size_t N>
T trace(const Matrix<T, N>& a) {
  T s{};
  for (std::size_t i = 0; i < N; ++i) s += a(i, i);
  return s;
}

/// Hilbert-Schmidt inner product Tr(a^dagger b).
template <typename T, std::size_t N>
T inner(const Matrix<T, N>& a, const Matrix<T, N>& b) {
  T s{};
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) s += detail::conj_value(a(k, l)) * b(k, l);
  return s;
}

/// Largest entry magnitude.
template <typename T, std::size_t N>
double max_abs(const Matrix<T, N>& a) {
  double m = 0.0;
  for (const auto& v : a.values()) m = std::max(m, detail::abs_value(v));
  return m;
}

template <typename T, std::size_t N>
double max_abs_diff(const Matrix<T, N>& a, const Matrix<T, N>& b) {
  return max_abs(a - b);
}

template <typename T, std::size_t N>
T determinant(const Matrix<T, N>& a) {
  if constexpr (N == 1) {
    return a(0, 0);
  } else if constexpr (N == 2) {
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  } else {
    // Laplace expansion along the first row; N <= 4 in practice.
    T det{};
    for (std::size_t c = 0; c < N; ++c) {
      Matrix<T, N - 1> minor;
      for (std::size_t i = 1; i < N; ++i) {
        std::size_t mj = 0;
        for (std::size_t j = 0; j < N; ++j) {
          if (j == c) continue;
          minor(i - 1, mj++) = a(i, j);
        }
      }
      const T term = a(0, c) * determinant(minor);
      det += (c % 2 == 0) ? term : -term;
    }
    return det;
  }
}

/// Per[[a,b],[c,d]] = ad + bc.
template <typename T>
T permanent(const Matrix<T, 2>& a) {
  return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
}

template <std::size_t N>
Matrix<Complex, N> to_complex(const Matrix<double, N>& a) {
  Matrix<Complex, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = a(i, j);
  return r;
}

template <std::size_t N>
Matrix<double, N> real_part(const Matrix<Complex, N>& a) {
  Matrix<double, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = a(i, j).real();
  return r;
}

template <std::size_t N>
double imag_max_abs(const Matrix<Complex, N>& a) {
  double m = 0.0;
  for (const auto& v : a.values()) m = std::max(m, std::abs(v.imag()));
  return m;
}

/// max |A - A^dagger|.
template <typename T, std::size_t N>
double hermitian_defect(const Matrix<T, N>& a) {
  return max_abs(a - adjoint(a));
}

/// max |A^dagger A - 1|.
template <typename T, std::size_t N>
double unitarity_defect(const Matrix<T, N>& a) {
  return max_abs(adjoint(a) * a - Matrix<T, N>::identity());
}

template <typename T, std::size_t N>
bool is_unitary(const Matrix<T, N>& a, double tol) {
  return unitarity_defect(a) <= tol;
}

// ---------------------------------------------------------------------------
// Two-qubit helpers. Basis order of C^2 (x) C^2 is (HH, HV, VH, VV): the first
// index is the left photon, the second the right photon.

enum class Axis { x, y, z };

CMat2 pauli(Axis axis);

/// sigma_in = (sigma_x + i sigma_y)/2 = [[0,1],[0,0]].
CMat2 sigma_in();

/// gamma~ = sigma_y gamma^* sigma_y, the spin-flip conjugation.
CMat2 tilde(const CMat2& g);

CMat4 kron(const CMat2& a, const CMat2& b);

/// vec(g)_{2i+j} = g_{ij}.
CVec<4> vec(const CMat2& g);

/// v v^dagger.
CMat4 outer(const CVec<4>& v);

/// Upper-left (0,0), upper-right (0,1), lower-left (1,0), lower-right (1,1) 2x2 block.
CMat2 block(const CMat4& m, std::size_t block_row, std::size_t block_col);

CMat4 from_blocks(const CMat2& b00, const CMat2& b01, const CMat2& b10, const CMat2& b11);

// ---------------------------------------------------------------------------
// Decompositions.

/// Eigen-decomposition of a Hermitian matrix: eigenvalues descending, and
/// orthonormal eigenvectors stored as the columns of `vectors`.
template <std::size_t N>
struct HermEigen {
  std::array<double, N> values{};
  Matrix<Complex, N> vectors;

  Matrix<Complex, N> reconstruct() const {
    std::array<Complex, N> d{};
    for (std::size_t i = 0; i < N; ++i) d[i] = values[i];
    return vectors * Matrix<Complex, N>::diagonal(d) * adjoint(vectors);
  }
};

namespace detail {

// Unitary Jacobi rotation G acting on coordinates (p, q) that diagonalizes the
// Hermitian 2x2 block [[app, g], [conj(g), aqq]] by G^dagger (.) G.
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
  Complex phase{1.0, 0.0};  // g / |g|

  Complex g_pp() const { return c; }
  Complex g_pq() const { return s; }
  Complex g_qp() const { return -s * std::conj(phase); }
  Complex g_qq() const { return c * std::conj(phase); }
};

inline JacobiRotation jacobi_rotation(double app, double aqq, Complex g) {
  JacobiRotation rot;
  const double h = std::abs(g);
  if (h == 0.0) return rot;
  rot.phase = g / h;
  const double zeta = (aqq - app) / (2.0 * h);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  rot.c = 1.0 / std::sqrt(1.0 + t * t);
  rot.s = t * rot.c;
  return rot;
}

// M <- M G restricted to columns p, q.
template <std::size_t N>
void rotate_columns(Matrix<Complex, N>& m, std::size_t p, std::size_t q, const JacobiRotation& r) {
  for (std::size_t k = 0; k < N; ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * r.g_pp() + mq * r.g_qp();
    m(k, q) = mp * r.g_pq() + mq * r.g_qq();
  }
}

// M <- G^dagger M restricted to rows p, q.
template <std::size_t N>
void rotate_rows(Matrix<Complex, N>& m, std::size_t p, std::size_t q, const JacobiRotation& r) {
  for (std::size_t k = 0; k < N; ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = std::conj(r.g_pp()) * mp + std::conj(r.g_qp()) * mq;
    m(q, k) = std::conj(r.g_pq()) * mp + std::conj(r.g_qq()) * mq;
  }
}

template <std::size_t N>
std::array<std::size_t, N> descending_order(const std::array<double, N>& v) {
  std::array<std::size_t, N> idx{};
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

// Completes the columns flagged in `filled` to an orthonormal basis, each new
// column from the unit vector with the largest component outside the span.
template <std::size_t N>
void complete_orthonormal(Matrix<Complex, N>& m, std::array<bool, N> filled) {
  for (std::size_t col = 0; col < N; ++col) {
    if (filled[col]) continue;
    std::array<Complex, N> best{};
    double best_norm = -1.0;
    for (std::size_t candidate = 0; candidate < N; ++candidate) {
      std::array<Complex, N> v{};
      v[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t other = 0; other < N; ++other) {
          if (!filled[other]) continue;
          Complex proj{};
          for (std::size_t k = 0; k < N; ++k) proj += std::conj(m(k, other)) * v[k];
          for (std::size_t k = 0; k < N; ++k) v[k] -= proj * m(k, other);
        }
      }
      double norm = 0.0;
      for (const auto& x : v) norm += std::norm(x);
      norm = std::sqrt(norm);
      if (norm > best_norm) {
        best_norm = norm;
        best = v;
      }
    }
    for (std::size_t k = 0; k < N; ++k) m(k, col) = best[k] / best_norm;
    filled[col] = true;
  }
}

}  // namespace detail

/// Cyclic complex Jacobi eigensolver. Throws NotHermitian when
/// max|A - A^dagger| > 1e-10 max|A|.
template <std::size_t N>
HermEigen<N> herm_eigen(const Matrix<Complex, N>& input) {
  const double scale = max_abs(input);
  const double defect = hermitian_defect(input);
  if (defect > 1e-10 * std::max(scale, 1e-300)) throw NotHermitian(defect);

  Matrix<Complex, N> a = 0.5 * (input + adjoint(input));
  Matrix<Complex, N> v = Matrix<Complex, N>::identity();

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
    if (off <= 1e-34 * std::max(scale * scale, 1e-300)) break;

    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const Complex g = a(p, q);
        if (std::abs(g) <= 1e-300) continue;
        const auto rot = detail::jacobi_rotation(a(p, p).real(), a(q, q).real(), g);
        detail::rotate_columns(a, p, q, rot);
        detail::rotate_rows(a, p, q, rot);
        detail::rotate_columns(v, p, q, rot);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::array<double, N> raw{};
  for (std::size_t i = 0; i < N; ++i) raw[i] = a(i, i).real();
  const auto order = detail::descending_order(raw);

  HermEigen<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = raw[order[k]];
    for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Real symmetric overload.
template <std::size_t N>
HermEigen<N> herm_eigen(const Matrix<double, N>& input) {
  return herm_eigen(to_complex(input));
}

/// A = U diag(s) V with U, V unitary and s descending and non-negative.
template <std::size_t N>
struct Svd {
  Matrix<Complex, N> u;
  std::array<double, N> s{};
  Matrix<Complex, N> v;

  Matrix<Complex, N> reconstruct() const {
    std::array<Complex, N> d{};
    for (std::size_t i = 0; i < N; ++i) d[i] = s[i];
    return u * Matrix<Complex, N>::diagonal(d) * v;
  }
};

/// One-sided (Hestenes) Jacobi SVD. Small singular values are accurate to
/// ~eps max|A| in absolute terms.
template <std::size_t N>
Svd<N> svd(const Matrix<Complex, N>& a) {
  Matrix<Complex, N> w = a;
  Matrix<Complex, N> acc = Matrix<Complex, N>::identity();

  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma{};
        for (std::size_t k = 0; k < N; ++k) {
          alpha += std::norm(w(k, p));
          beta += std::norm(w(k, q));
          gamma += std::conj(w(k, p)) * w(k, q);
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300) continue;
        rotated = true;
        const auto rot = detail::jacobi_rotation(alpha, beta, gamma);
        detail::rotate_columns(w, p, q, rot);
        detail::rotate_columns(acc, p, q, rot);
      }
    }
    if (!rotated) break;
  }

  std::array<double, N> norms{};
  for (std::size_t j = 0; j < N; ++j) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < N; ++k) n2 += std::norm(w(k, j));
    norms[j] = std::sqrt(n2);
  }
  const auto order = detail::descending_order(norms);
  const double tiny = 1e-300;

  Svd<N> out;
  Matrix<Complex, N> vcols;
  std::array<bool, N> filled{};
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t j = order[k];
    out.s[k] = norms[j];
    for (std::size_t i = 0; i < N; ++i) vcols(i, k) = acc(i, j);
    if (norms[j] > tiny && norms[j] > 1e-14 * norms[order[0]]) {
      for (std::size_t i = 0; i < N; ++i) out.u(i, k) = w(i, j) / norms[j];
      filled[k] = true;
    }
  }
  detail::complete_orthonormal(out.u, filled);
  out.v = adjoint(vcols);
  return out;
}

/// 2x2 singular value decomposition (same contract as svd<2>).
inline Svd<2> svd2(const CMat2& a) { return svd(a); }

// ---------------------------------------------------------------------------
// Reproducible random numbers and Haar-distributed unitaries.

/// Seeded generator: std::mt19937_64, 53-bit uniforms in [0,1), Box-Muller
/// normals. Every step is fixed by this definition, so draws are identical
/// across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

  /// Standard complex normal: (x + iy)/sqrt(2) with x, y ~ N(0,1).
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-random unitary: Gram-Schmidt on an i.i.d. complex Gaussian matrix.
/// Gram-Schmidt yields the QR factor with a positive real diagonal in R,
/// which is the phase correction that makes Q exactly Haar distributed.
template <std::size_t N>
Matrix<Complex, N> haar_unitary(Rng& rng) {
  Matrix<Complex, N> z;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) z(i, j) = rng.complex_normal();

  for (std::size_t j = 0; j < N; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj{};
        for (std::size_t i = 0; i < N; ++i) proj += std::conj(z(i, k)) * z(i, j);
        for (std::size_t i = 0; i < N; ++i) z(i, j) -= proj * z(i, k);
      }
    }
    double n2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) n2 += std::norm(z(i, j));
    const double norm = std::sqrt(n2);
    for (std::size_t i = 0; i < N; ++i) z(i, j) /= norm;
  }
  return z;
}

template <std::size_t N>
Matrix<Complex, N> haar_unitary(std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary<N>(rng);
}

// ---------------------------------------------------------------------------
// JSON: {"rows": n, "cols": n, "re": [...], "im": [...]}, row-major.

template <typename T, std::size_t N>
nlohmann::json matrix_to_json(const Matrix<T, N>& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (const auto& v : m.values()) {
    if constexpr (std::is_same_v<T, Complex>) {
      re.push_back(v.real());
      im.push_back(v.imag());
    } else {
      re.push_back(v);
      im.push_back(0.0);
    }
  }
  return {{"rows", N}, {"cols", N}, {"re", re}, {"im", im}};
}

/// Parses the matrix JSON format; throws InvalidInput on any shape mismatch.
template <std::size_t N>
Matrix<Complex, N> matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("matrix JSON must be an object");
  for (const char* key : {"rows", "cols", "re", "im"})
    if (!j.contains(key)) throw InvalidInput(std::string("matrix JSON is missing '") + key + "'");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() ||
      j["rows"].get<long long>() != static_cast<long long>(N) ||
      j["cols"].get<long long>() != static_cast<long long>(N))
    throw InvalidInput("matrix JSON must be " + std::to_string(N) + "x" + std::to_string(N));
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array() || re.size() != N * N || im.size() != N * N)
    throw InvalidInput("matrix JSON 're'/'im' must hold " + std::to_string(N * N) + " numbers");
  std::array<Complex, N * N> values{};
  for (std::size_t k = 0; k < N * N; ++k) {
    if (!re[k].is_number() || !im[k].is_number()) throw InvalidInput("matrix JSON entries must be numbers");
    values[k] = Complex(re[k].get<double>(), im[k].get<double>());
  }
  return Matrix<Complex, N>::from_row_major(values);
}

}  // namespace bellsplit
