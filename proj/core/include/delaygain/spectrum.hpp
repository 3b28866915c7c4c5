#pragma once

#include <vector>

#include <Eigen/Dense>

#include "delaygain/lambertw.hpp"

namespace delaygain {

/// Validated, ordered eigenvalue set of a Hurwitz matrix.
///
/// Invariants (enforced on construction):
///  - every eigenvalue has Re < -1e-12,
///  - sorted by ascending |Re|, ties by ascending |Im|, then Im >= 0 first,
///  - closed under conjugation within 1e-9.
class Spectrum {
 public:
  /// Eigenvalues of a real square matrix (n <= 500), each certified by the
  /// residual ||A v - alpha v|| <= tol * ||A||_F against a unit eigenvector.
  static Spectrum of_matrix(const Eigen::MatrixXd& m);

  /// Validate an explicit eigenvalue list.  With add_missing_conjugates the
  /// conjugate of any unmatched complex value is inserted; otherwise an
  /// unmatched value is a validation error.
  static Spectrum of_values(std::vector<Complex> values,
                            bool add_missing_conjugates = false);

  const std::vector<Complex>& eigenvalues() const noexcept { return eigs_; }
  std::size_t size() const noexcept { return eigs_.size(); }
  const Complex& operator[](std::size_t i) const { return eigs_[i]; }

  /// True when every eigenvalue is real (used by the closed-form paths).
  bool all_real() const noexcept;

 private:
  explicit Spectrum(std::vector<Complex> eigs) : eigs_(std::move(eigs)) {}
  std::vector<Complex> eigs_;
};

}  // namespace delaygain
