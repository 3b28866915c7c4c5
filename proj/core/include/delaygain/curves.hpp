#pragma once

#include <string>
#include <vector>

namespace delaygain {

/// Sampled planar curve in the left half plane.
struct CurveSamples {
  std::string curve_id;  ///< "lambda", "c0", or "cc"
  double c = 0;          ///< level value, meaningful for curve_id "cc"
  std::vector<std::pair<double, double>> points;
};

/// Locus of gain-stationary points: polar curve
/// r = -cos(2θ)/cos(θ) · e^{-cos 2θ}, angle φ = θ - cos(2θ)tan(θ)e^{-cos 2θ},
/// θ uniform on [3π/4, 5π/4].  Passes through (-1/e, 0) at θ = π and the
/// origin at both endpoints.
CurveSamples lambda_curve(int samples);

/// Boundary of the unit-or-better gain region: polar r = θ - π/2 for
/// θ in [π/2, π], mirrored about the x-axis.
CurveSamples c0_curve(int samples);

/// Level set of the gain at value c != 0: for each u on a grid in (0, π),
/// solve e^{cx}(cx cos u - u sin u) = x for x <= 0, then
/// y = e^{cx}(u cos u + cx sin u).  Points with no nonpositive root are
/// omitted; an empty curve is a valid result.
CurveSamples level_set(double c, int samples);

/// Membership in the closed region bounded by the c0 curve (x <= 0 and
/// polar radius at most r_C0 at the matching angle, boundary within 1e-12
/// counts as inside).
bool s0_contains(double x, double y);

}  // namespace delaygain
