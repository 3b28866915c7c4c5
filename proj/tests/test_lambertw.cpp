#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "delaygain/errors.hpp"
#include "delaygain/lambertw.hpp"
#include "oracles.hpp"

using delaygain::Complex;
using delaygain::lambert_w;
using delaygain::lambert_w0;
using delaygain::lambert_w0_derivative;

namespace {
constexpr double kEInv = 0.36787944117144233;
}

TEST_CASE("principal branch fixed points") {
  CHECK(std::abs(lambert_w0({0.0, 0.0})) == 0.0);
  CHECK(std::abs(lambert_w0({-kEInv, 0.0}) - Complex(-1.0, 0.0)) < 1e-10);
  // Frozen from Newton on w e^w = 1 starting at w = 1.
  CHECK(lambert_w0({1.0, 0.0}).real() == doctest::Approx(0.56714329040978384).epsilon(1e-12));
  CHECK(lambert_w0({1.0, 0.0}).imag() == 0.0);
}

TEST_CASE("cut value matches the real-branch equation") {
  // For z = -0.8, W0 = -u cot u + i u with u e^{-u cot u} / sin u = 0.8.
  double u = oracles::solve_cut_u(0.8);
  Complex w = lambert_w0({-0.8, 0.0});
  CHECK(w.real() == doctest::Approx(-u / std::tan(u)).epsilon(1e-10));
  CHECK(w.imag() == doctest::Approx(u).epsilon(1e-10));
  CHECK(w.imag() > 0.0);  // continuation from above on the ray z < -1/e
}

TEST_CASE("round-trip residual on a 10^4 grid") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    Complex z(d(rng), d(rng));
    if (std::abs(z + kEInv) < 1e-9) continue;
    Complex w = lambert_w0(z);
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-12 * std::max(1.0, std::abs(z)));
    CHECK(w.imag() > -std::numbers::pi);
    CHECK(w.imag() <= std::numbers::pi);
  }
}

TEST_CASE("real axis properties") {
  for (double x = -kEInv + 1e-6; x < 50.0; x += 0.1) {
    Complex w = lambert_w0({x, 0.0});
    CHECK(w.imag() == 0.0);
    CHECK(w.real() > -1.0 - 1e-12);
  }
}

TEST_CASE("conjugate symmetry") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    Complex z(d(rng), std::abs(d(rng)) + 1e-6);
    Complex a = lambert_w0(z);
    Complex b = lambert_w0(std::conj(z));
    CHECK(std::abs(std::conj(a) - b) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("k-th branch residual and strip") {
  CHECK(std::abs(lambert_w({-kEInv, 0.0}, -1) - Complex(-1.0, 0.0)) < 1e-6);
  CHECK(std::abs(lambert_w({1.0, 0.0}, 0) - lambert_w0({1.0, 0.0})) == 0.0);
  // Frozen from Newton on w e^w = -0.2 starting at w = -3.
  Complex wm1 = lambert_w({-0.2, 0.0}, -1);
  CHECK(wm1.real() == doctest::Approx(-2.5426413577735265).epsilon(1e-10));
  CHECK(std::abs(wm1.imag()) < 1e-12);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int k : {-2, -1, 1, 2}) {
    for (int i = 0; i < 50; ++i) {
      Complex z(d(rng), d(rng));
      if (std::abs(z) < 1e-3) continue;
      Complex w = lambert_w(z, k);
      CHECK(std::abs(w * std::exp(w) - z) <= 1e-12 * std::max(1.0, std::abs(z)));
    }
  }
  CHECK_THROWS_AS(lambert_w({0.0, 0.0}, -1), delaygain::ValidationError);
}

TEST_CASE("branch dominance of the principal branch") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> re(-3.0, -0.1), im(-3.0, 3.0),
      frac(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    Complex alpha(re(rng), im(rng));
    double tau_bar = std::abs(alpha.imag()) == 0.0
                         ? std::numbers::pi / (2.0 * std::abs(alpha))
                         : std::abs(std::atan(alpha.real() / alpha.imag())) /
                               std::abs(alpha);
    Complex z = alpha * (frac(rng) * tau_bar);
    Complex w0 = lambert_w0(z);
    for (int k : {-2, -1, 1, 2})
      CHECK(w0.real() >= lambert_w(z, k).real() - 1e-9);
  }
}

TEST_CASE("derivative") {
  CHECK(std::abs(lambert_w0_derivative({0.0, 0.0}) - Complex(1.0, 0.0)) <
        1e-12);
  // Frozen: 1 / (1 + e^Omega) with Omega = W0(1).
  CHECK(lambert_w0_derivative({1.0, 0.0}).real() ==
        doctest::Approx(0.36189625663488922).epsilon(1e-10));
  CHECK_THROWS_AS(lambert_w0_derivative({-kEInv, 0.0}),
                  delaygain::NumericalError);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    Complex z(d(rng), d(rng));
    if (std::abs(z + kEInv) < 0.05) continue;
    double h = 1e-7 * std::max(1.0, std::abs(z));
    Complex fd =
        (lambert_w0(z + Complex(h, 0.0)) - lambert_w0(z - Complex(h, 0.0))) /
        (2.0 * h);
    Complex an = lambert_w0_derivative(z);
    if (z.imag() == 0.0 && z.real() < -kEInv) continue;  // cut straddle
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }

  // Conjugate input gives conjugate derivative.
  Complex z(0.4, 1.3);
  CHECK(std::abs(std::conj(lambert_w0_derivative(z)) -
                 lambert_w0_derivative(std::conj(z))) < 1e-12);
}

TEST_CASE("non-finite input rejected") {
  CHECK_THROWS_AS(lambert_w0({std::nan(""), 0.0}), delaygain::ValidationError);
  CHECK_THROWS_AS(
      lambert_w0({std::numeric_limits<double>::infinity(), 0.0}),
      delaygain::ValidationError);
}
