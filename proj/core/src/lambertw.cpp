#include "delaygain/lambertw.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "delaygain/errors.hpp"

namespace delaygain {

namespace {

constexpr double kEInv = 0.36787944117144233;  // 1/e
constexpr double kPi = std::numbers::pi;

bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Series about the branch point z = -1/e in p = sqrt(2(e z + 1)).
Complex branch_point_series(const Complex& p) {
  // w = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280
  Complex w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 +
              p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
  return w;
}

// One Halley step for f(w) = w e^w - z.
Complex halley_step(const Complex& w, const Complex& z) {
  Complex ew = std::exp(w);
  Complex f = w * ew - z;
  if (f == Complex(0.0, 0.0)) return w;
  Complex fp = ew * (w + 1.0);
  Complex fpp = ew * (w + 2.0);
  Complex denom = fp - f * fpp / (2.0 * fp);
  if (denom == Complex(0.0, 0.0)) return w;
  return w - f / denom;
}

bool iterate(Complex& w, const Complex& z) {
  for (int i = 0; i < 50; ++i) {
    Complex next = halley_step(w, z);
    double step = std::abs(next - w);
    w = next;
    if (step <= 1e-15 * std::max(1.0, std::abs(w))) return true;
  }
  // Accept if the residual is already within contract despite slow steps.
  return std::abs(w * std::exp(w) - z) <= 1e-13 * std::max(1.0, std::abs(z));
}

Complex asymptotic_guess(const Complex& z, int k) {
  Complex lz = std::log(z) + Complex(0.0, 2.0 * kPi * k);
  if (std::abs(lz) < 1e-300) return lz;
  return lz - std::log(lz);
}

bool valid_w0(const Complex& w, const Complex& z) {
  if (std::abs(w * std::exp(w) - z) > 1e-12 * std::max(1.0, std::abs(z)))
    return false;
  if (w.imag() <= -kPi || w.imag() > kPi) return false;
  // The principal-branch range is bounded by Re(w) = -u cot(u), u = Im(w)
  // (limit -1 at u = 0); anything left of it belongs to branches -1 or +1.
  double u = std::abs(w.imag());
  double bound = u > 1e-12 ? -u / std::tan(u) : -1.0;
  return w.real() >= bound - 1e-7 * std::max(1.0, std::abs(w.real()));
}

}  // namespace

Complex lambert_w0(const Complex& z) {
  if (!finite(z))
    throw ValidationError("invalid-argument", "non-finite Lambert W argument");
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};

  // Arguments on the cut ray z < -1/e take the continuation from above:
  // nudge -0.0 imaginary parts to +0.0 so log/sqrt pick the upper side.
  Complex zz = z;
  if (zz.imag() == 0.0) zz = Complex(zz.real(), +0.0);

  Complex pbase = std::sqrt(2.0 * (std::numbers::e * zz + 1.0));
  double dist_bp = std::abs(zz + kEInv);

  if (dist_bp < 1e-8) {
    // Halley degenerates at the branch point; the series alone is well
    // within the residual contract this close in.
    return branch_point_series(pbase);
  }

  std::vector<Complex> guesses;
  if (dist_bp < 0.3) guesses.push_back(branch_point_series(pbase));
  if (std::abs(zz) < 0.3) {
    Complex t = zz;
    guesses.push_back(t * (1.0 + t * (-1.0 + t * 1.5)));
  }
  guesses.push_back(asymptotic_guess(zz, 0));
  guesses.push_back(Complex(0.5, 0.0));
  guesses.push_back(branch_point_series(pbase));

  for (const Complex& g0 : guesses) {
    Complex w = g0;
    if (!iterate(w, zz)) continue;
    if (w.imag() == 0.0) w = Complex(w.real(), +0.0);
    if (valid_w0(w, zz)) return w;
  }
  throw NumericalError("no-convergence", "Lambert W0 iteration failed");
}

Complex lambert_w(const Complex& z, int k) {
  if (!finite(z))
    throw ValidationError("invalid-argument", "non-finite Lambert W argument");
  if (k == 0) return lambert_w0(z);
  if (z == Complex(0.0, 0.0))
    throw ValidationError("branch-undefined", "W_k(0) undefined for k != 0");

  Complex zz = z;
  if (zz.imag() == 0.0) zz = Complex(zz.real(), +0.0);

  std::vector<Complex> guesses;
  guesses.push_back(asymptotic_guess(zz, k));
  {
    // Log fixed point w = lz - log(w); linearly convergent nearly everywhere
    // on the nonprincipal branches, then polished by Halley below.
    Complex lz = std::log(zz) + Complex(0.0, 2.0 * kPi * k);
    Complex w = lz;
    for (int i = 0; i < 40 && w != Complex(0.0, 0.0); ++i) w = lz - std::log(w);
    guesses.push_back(w);
  }
  if (k == -1 && zz.imag() == 0.0 && zz.real() < 0.0 && zz.real() > -kEInv) {
    // Real lower branch on (-1/e, 0): start left of -1.
    double l1 = std::log(-zz.real());
    guesses.push_back(Complex(l1 - std::log(-l1), 0.0));
    guesses.push_back(Complex(-3.0, 0.0));
  }
  if (std::abs(zz + kEInv) < 0.3 && (k == -1 || k == 1)) {
    Complex p = std::sqrt(2.0 * (std::numbers::e * zz + 1.0));
    // The adjacent branch meets the branch point from -p.
    guesses.push_back(branch_point_series(-p));
  }

  for (const Complex& g0 : guesses) {
    Complex w = g0;
    if (!iterate(w, zz)) continue;
    if (std::abs(w * std::exp(w) - zz) > 1e-12 * std::max(1.0, std::abs(zz)))
      continue;
    if (w.imag() == 0.0) w = Complex(w.real(), +0.0);
    // Real points of branch -1 live on (-inf, -1] and evade the unwinding
    // identity below (their Log w and Log z arguments cancel).
    if (k == -1 && w.imag() == 0.0 && w.real() <= -1.0 + 1e-12) return w;
    // Branch membership: Im(w + Log w) - Im(Log z) = 2 pi k.
    double khat =
        (w.imag() + std::arg(w) - std::arg(zz)) / (2.0 * kPi);
    if (std::lround(khat) == k && std::abs(khat - std::lround(khat)) < 0.25)
      return w;
  }
  throw NumericalError("no-convergence", "Lambert W_k iteration failed");
}

Complex lambert_w0_derivative(const Complex& z) {
  if (!finite(z))
    throw ValidationError("invalid-argument", "non-finite Lambert W argument");
  if (std::abs(z + kEInv) <= 1e-12)
    throw NumericalError("branch-point-singularity",
                         "dW0/dz singular at z = -1/e");
  Complex w = lambert_w0(z);
  return 1.0 / (z + std::exp(w));
}

}  // namespace delaygain
