#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "delaygain/spectrum.hpp"

namespace delaygain {

/// Parsed matrix-or-spectrum document: {"matrix": [[...],...]} or
/// {"spectrum": [{"re": r, "im": i}, ...]}.  Exactly one of the two is set.
struct InputDocument {
  std::optional<Eigen::MatrixXd> matrix;
  std::optional<std::vector<Complex>> spectrum_values;
};

/// Parse a matrix-or-spectrum JSON document.  Errors: "parse-error",
/// "empty-spectrum", "not-square".
InputDocument parse_input_document(const std::string& json_text);

/// Spectrum from a parsed document (eigendecomposition or list validation).
Spectrum spectrum_of_document(const InputDocument& doc);

/// Shortest-round-trip decimal rendering of a double (17 significant digits,
/// '.' decimal separator, no locale).
std::string format_double(double v);

/// FNV-1a 64-bit hash of raw bytes, hex-encoded; used to fingerprint inputs
/// in reports.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace delaygain
