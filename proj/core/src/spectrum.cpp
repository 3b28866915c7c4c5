#include "delaygain/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "delaygain/delay_analysis.hpp"
#include "delaygain/errors.hpp"

namespace delaygain {

namespace {

bool re_less(const Complex& a, const Complex& b) {
  double ra = std::abs(a.real()), rb = std::abs(b.real());
  if (ra != rb) return ra < rb;
  double ia = std::abs(a.imag()), ib = std::abs(b.imag());
  if (ia != ib) return ia < ib;
  return (a.imag() >= 0.0) && (b.imag() < 0.0);
}

void check_hurwitz(const std::vector<Complex>& eigs) {
  for (const Complex& e : eigs) {
    if (!(e.real() < -1e-12))
      throw ValidationError("not-hurwitz",
                            "eigenvalue with Re >= -1e-12: re=" +
                                std::to_string(e.real()));
  }
}

void check_conjugate_closure(std::vector<Complex>& eigs, bool repair) {
  const double tol = 1e-9;
  std::vector<bool> matched(eigs.size(), false);
  std::vector<Complex> to_add;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (matched[i]) continue;
    if (std::abs(eigs[i].imag()) <= tol) {
      matched[i] = true;
      continue;
    }
    bool found = false;
    for (std::size_t j = 0; j < eigs.size(); ++j) {
      if (j == i || matched[j]) continue;
      if (std::abs(eigs[j] - std::conj(eigs[i])) <= tol) {
        matched[i] = matched[j] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      if (repair) {
        matched[i] = true;
        to_add.push_back(std::conj(eigs[i]));
      } else {
        throw ValidationError("conjugate-closure",
                              "missing conjugate of eigenvalue with im=" +
                                  std::to_string(eigs[i].imag()));
      }
    }
  }
  eigs.insert(eigs.end(), to_add.begin(), to_add.end());
}

}  // namespace

Spectrum Spectrum::of_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw ValidationError("not-square", "matrix must be square");
  if (m.rows() == 0) throw ValidationError("empty-matrix", "0x0 matrix");
  if (m.rows() > 500)
    throw ValidationError("too-large", "matrix dimension exceeds 500");
  if (!m.allFinite())
    throw ValidationError("invalid-argument", "non-finite matrix entry");

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("no-convergence", "eigenvalue iteration failed");

  const double norm_f = m.norm();
  const double tol = tolerances().eig_residual;
  std::vector<Complex> eigs;
  eigs.reserve(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Complex alpha = solver.eigenvalues()[i];
    Eigen::VectorXcd v = solver.eigenvectors().col(i);
    v.normalize();
    double residual = (m.cast<Complex>() * v - alpha * v).norm();
    if (residual > tol * std::max(norm_f, 1e-300))
      throw NumericalError("eig-residual",
                           "uncertified eigenpair, residual=" +
                               std::to_string(residual));
    eigs.push_back(alpha);
  }

  check_hurwitz(eigs);
  check_conjugate_closure(eigs, /*repair=*/false);
  std::sort(eigs.begin(), eigs.end(), re_less);
  return Spectrum(std::move(eigs));
}

Spectrum Spectrum::of_values(std::vector<Complex> values,
                             bool add_missing_conjugates) {
  if (values.empty())
    throw ValidationError("empty-spectrum", "no eigenvalues given");
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("invalid-argument", "non-finite eigenvalue");
  }
  check_hurwitz(values);
  check_conjugate_closure(values, add_missing_conjugates);
  std::sort(values.begin(), values.end(), re_less);
  return Spectrum(std::move(values));
}

bool Spectrum::all_real() const noexcept {
  for (const Complex& e : eigs_)
    if (e.imag() != 0.0) return false;
  return true;
}

}  // namespace delaygain
