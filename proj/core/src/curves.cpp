#include "delaygain/curves.hpp"

#include <cmath>
#include <numbers>

#include "delaygain/errors.hpp"
#include "delaygain/lambertw.hpp"

namespace delaygain {

namespace {

constexpr double kPi = std::numbers::pi;

void require_samples(int samples) {
  if (samples < 3)
    throw ValidationError("domain-error", "samples must be >= 3");
}

// Polar radius of the unit-gain boundary at angle theta in [pi/2, 3pi/2].
double c0_radius(double theta) {
  double half = theta <= kPi ? theta : 2.0 * kPi - theta;  // fold lower half up
  return half - kPi / 2.0;
}

}  // namespace

CurveSamples lambda_curve(int samples) {
  require_samples(samples);
  CurveSamples out;
  out.curve_id = "lambda";
  out.points.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    double theta =
        3.0 * kPi / 4.0 + (kPi / 2.0) * k / (samples - 1);
    double c2 = std::cos(2.0 * theta);
    double r = -c2 / std::cos(theta) * std::exp(-c2);
    double phi = theta - c2 * std::tan(theta);
    out.points.emplace_back(r * std::cos(phi), r * std::sin(phi));
  }
  return out;
}

CurveSamples c0_curve(int samples) {
  require_samples(samples);
  CurveSamples out;
  out.curve_id = "c0";
  out.points.reserve(2 * samples - 1);
  // Upper half: theta from pi down to pi/2 reaches (0,0) last; emit the
  // curve left-to-right starting at (-pi/2, 0).
  for (int k = 0; k < samples; ++k) {
    double theta = kPi - (kPi / 2.0) * k / (samples - 1);
    double r = theta - kPi / 2.0;
    out.points.emplace_back(r * std::cos(theta), r * std::sin(theta));
  }
  // Mirror below the axis, skipping the shared origin.
  for (int k = samples - 2; k >= 0; --k) {
    double theta = kPi - (kPi / 2.0) * k / (samples - 1);
    double r = theta - kPi / 2.0;
    out.points.emplace_back(r * std::cos(theta), -r * std::sin(theta));
  }
  return out;
}

CurveSamples level_set(double c, int samples) {
  require_samples(samples);
  if (c == 0.0)
    throw ValidationError("domain-error", "c = 0 is the c0 curve");
  CurveSamples out;
  out.curve_id = "cc";
  out.c = c;
  const double u_lo = 1e-6, u_hi = kPi - 1e-6;
  for (int k = 0; k < samples; ++k) {
    double u = u_lo + (u_hi - u_lo) * k / (samples - 1);
    auto f = [&](double x) {
      return std::exp(c * x) * (c * x * std::cos(u) - u * std::sin(u)) - x;
    };
    // First bracket scanning down from 0.
    double x = 0.0;
    bool found = false;
    double prev = 0.0, fprev = f(0.0);
    for (double step = 0.005; prev > -10.0; prev -= step) {
      double next = prev - step;
      double fn = f(next);
      if (fprev == 0.0) {
        x = prev;
        found = true;
        break;
      }
      if (fprev * fn < 0.0) {
        double lo = next, hi = prev, flo = fn, fhi = fprev;
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
          double mid = 0.5 * (lo + hi);
          double fm = f(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
          } else {
            lo = mid;
            flo = fm;
          }
        }
        x = 0.5 * (lo + hi);
        found = true;
        break;
      }
      fprev = fn;
    }
    if (!found) continue;
    if (x > 0.0) continue;
    double y = std::exp(c * x) * (u * std::cos(u) + c * x * std::sin(u));
    // x = 0 roots degenerate to the origin; keep only genuine level points.
    Complex p(x, y);
    if (std::abs(p) < 1e-12) continue;
    double g = lambert_w0(p).real() / p.real();
    if (std::abs(g - c) > 1e-6) continue;
    out.points.emplace_back(x, y);
  }

  // The u-grid approaches the real-axis endpoint only in the limit; append
  // the exact crossing, the real root of Re(W0(x)) = c*x left of -1/e.
  auto axis = [&](double x) {
    return lambert_w0(Complex(x, 0.0)).real() - c * x;
  };
  constexpr double kEInv = 0.36787944117144233;
  double lo = -20.0, hi = -kEInv - 1e-12;
  double flo = axis(lo), fhi = axis(hi);
  if (std::abs(fhi) <= 1e-12) {
    out.points.emplace_back(hi, 0.0);
  } else if (flo * fhi < 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = axis(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fm < 0.0) {
        hi = mid;
        fhi = fm;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    out.points.emplace_back(0.5 * (lo + hi), 0.0);
  }
  return out;
}

bool s0_contains(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw ValidationError("invalid-argument", "non-finite point");
  if (x == 0.0 && y == 0.0) return true;
  if (x > 1e-12) return false;
  double theta = std::atan2(y, std::min(x, 0.0));
  if (theta < 0.0) theta += 2.0 * kPi;  // now in [pi/2, 3pi/2] for x <= 0
  double r = std::hypot(std::min(x, 0.0), y);
  return r <= c0_radius(theta) + 1e-12;
}

}  // namespace delaygain
