#pragma once

#include <stdexcept>
#include <string>

namespace bellsplit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong JSON shape, non-finite entries, bad CSV, bad grid.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(double defect)
      : Error("matrix is not Hermitian (defect " + std::to_string(defect) + ")"),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class NotUnitary : public Error {
 public:
  explicit NotUnitary(double defect)
      : Error("matrix is not unitary (max |A^dagger A - 1| = " + std::to_string(defect) + ")"),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Transmission eigenvalues of t^dagger t coincide or touch 0/1, so the
/// block polar factorization of S is not unique.
class DegenerateTransmission : public Error {
 public:
  using Error::Error;
};

class NotRankOne : public Error {
 public:
  using Error::Error;
};

/// The coincidence-postselected ensemble is empty (normalization N = 0).
class ZeroCoincidence : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

/// A packet has no amplitude inside the coincidence window.
class EmptyWindow : public Error {
 public:
  using Error::Error;
};

/// xi_1 ~ xi_2 (or xi_2 ~ 0): the semi-polar parameters are not determined.
class DegenerateXi : public Error {
 public:
  using Error::Error;
};

}  // namespace bellsplit
