#include "delaygain/io.hpp"

#include <cinttypes>
#include <cstdio>

#include "json.hpp"

#include "delaygain/errors.hpp"

namespace delaygain {

InputDocument parse_input_document(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("parse-error", e.what());
  }
  if (!doc.is_object())
    throw ValidationError("parse-error", "expected a JSON object");

  InputDocument out;
  try {
    if (doc.contains("matrix")) {
      const auto& rows = doc.at("matrix");
      if (!rows.is_array() || rows.empty())
        throw ValidationError("parse-error", "matrix must be a nonempty array");
      Eigen::Index n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd m(n, n);
      Eigen::Index i = 0;
      for (const auto& row : rows) {
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
          throw ValidationError("not-square", "matrix rows must have length n");
        Eigen::Index j = 0;
        for (const auto& v : row) m(i, j++) = v.get<double>();
        ++i;
      }
      out.matrix = std::move(m);
    } else if (doc.contains("spectrum")) {
      const auto& vals = doc.at("spectrum");
      if (!vals.is_array())
        throw ValidationError("parse-error", "spectrum must be an array");
      if (vals.empty())
        throw ValidationError("empty-spectrum", "no eigenvalues given");
      std::vector<Complex> spectrum;
      for (const auto& v : vals)
        spectrum.emplace_back(v.at("re").get<double>(),
                              v.value("im", 0.0));
      out.spectrum_values = std::move(spectrum);
    } else {
      throw ValidationError("parse-error",
                            "expected a \"matrix\" or \"spectrum\" key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("parse-error", e.what());
  }
  return out;
}

Spectrum spectrum_of_document(const InputDocument& doc) {
  if (doc.matrix) return Spectrum::of_matrix(*doc.matrix);
  return Spectrum::of_values(*doc.spectrum_values);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace delaygain
