#pragma once

#include <stdexcept>
#include <string>

namespace delaygain {

/// Rejected input: bad documents, non-Hurwitz spectra, violated preconditions.
/// `kind()` is a stable machine-readable tag (e.g. "not-hurwitz").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string kind, std::string detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// An internal numerical procedure failed to meet its contract
/// (non-convergence, invariant violation, singular evaluation point).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string kind, std::string detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace delaygain
