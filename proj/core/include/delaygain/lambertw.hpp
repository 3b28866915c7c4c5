#pragma once

#include <complex>

namespace delaygain {

using Complex = std::complex<double>;

/// Principal branch W0 of the Lambert W function: the solution of
/// w * exp(w) = z with Im(w) in (-pi, pi].
///
/// On the branch cut z in (-inf, -1/e) the value continued from the upper
/// half plane is returned (Im(w) in (0, pi)).  The result satisfies
/// |w*exp(w) - z| <= 1e-12 * max(1, |z|).
Complex lambert_w0(const Complex& z);

/// k-th branch of the Lambert W function.  z must be nonzero when k != 0.
Complex lambert_w(const Complex& z, int k);

/// dW0/dz = 1 / (z + exp(W0(z))).  Singular at the branch point z = -1/e;
/// inputs within 1e-12 of it raise NumericalError("branch-point-singularity").
Complex lambert_w0_derivative(const Complex& z);

}  // namespace delaygain
