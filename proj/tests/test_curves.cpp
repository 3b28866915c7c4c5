#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "delaygain/curves.hpp"
#include "delaygain/delay_analysis.hpp"
#include "delaygain/errors.hpp"

using namespace delaygain;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEInv = 0.36787944117144233;
}

TEST_CASE("stationary locus endpoints and branch point") {
  auto c = lambda_curve(3);
  REQUIRE(c.points.size() == 3);
  CHECK(std::hypot(c.points[0].first, c.points[0].second) < 1e-12);
  CHECK(std::hypot(c.points[2].first, c.points[2].second) < 1e-12);
  CHECK(c.points[1].first == doctest::Approx(-kEInv).epsilon(1e-12));
  CHECK(std::abs(c.points[1].second) < 1e-12);
  CHECK_THROWS_AS(lambda_curve(2), ValidationError);
}

TEST_CASE("stationary locus is gain-stationary along its rays") {
  auto c = lambda_curve(201);
  for (const auto& [x, y] : c.points) {
    double r = std::hypot(x, y);
    if (r < 1e-6) continue;
    if (std::abs(Complex(x, y) + Complex(kEInv, 0.0)) < 1e-9) continue;
    // Treat the point as alpha * tau with tau = 1.
    CHECK(std::abs(gain_derivative(Complex(x, y), 1.0)) <= 1e-6);
  }
}

TEST_CASE("stationary locus symmetry and confinement") {
  auto c = lambda_curve(101);
  std::size_t n = c.points.size();
  for (std::size_t k = 0; k < n; ++k) {
    auto [x, y] = c.points[k];
    auto [xm, ym] = c.points[n - 1 - k];
    CHECK(x == doctest::Approx(xm).epsilon(1e-9));
    CHECK(y == doctest::Approx(-ym).epsilon(1e-9));
    CHECK(std::abs(y) <= std::abs(x) + 1e-9);  // between the lines y = +-x
    CHECK(s0_contains(x, y));
  }
}

TEST_CASE("unit-gain boundary curve") {
  auto c = c0_curve(3);
  CHECK(c.points.front().first == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
  CHECK(std::abs(c.points.front().second) < 1e-12);
  bool has_origin = false;
  for (auto [x, y] : c.points)
    if (std::hypot(x, y) < 1e-12) has_origin = true;
  CHECK(has_origin);
  // theta = 3pi/4 sample.
  auto full = c0_curve(3);
  CHECK(full.points[1].first ==
        doctest::Approx(-(kPi / 4.0) * std::sqrt(2.0) / 2.0).epsilon(1e-12));
  CHECK(full.points[1].second ==
        doctest::Approx((kPi / 4.0) * std::sqrt(2.0) / 2.0).epsilon(1e-12));

  auto dense = c0_curve(301);
  for (auto [x, y] : dense.points) {
    Complex p(x, y);
    if (std::abs(p) < 1e-9) continue;
    double g = lambert_w0(p).real() / p.real();
    CHECK(std::abs(g) <= 1e-8);
  }
  // Symmetry of the full sampled polyline.
  std::size_t n = dense.points.size();
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(dense.points[k].first ==
          doctest::Approx(dense.points[n - 1 - k].first).epsilon(1e-12));
    CHECK(dense.points[k].second ==
          doctest::Approx(-dense.points[n - 1 - k].second).epsilon(1e-12));
  }
}

TEST_CASE("level sets hit their level") {
  for (double c : {0.5, 1.0, 2.0, -0.5}) {
    auto ls = level_set(c, 301);
    CHECK(!ls.points.empty());
    for (auto [x, y] : ls.points) {
      CHECK(x <= 1e-12);
      Complex p(x, y);
      if (std::abs(p) < 1e-9) continue;
      double g = lambert_w0(p).real() / p.real();
      CHECK(std::abs(g - c) <= 1e-6);
    }
  }
  CHECK_THROWS_AS(level_set(0.0, 100), ValidationError);
}

TEST_CASE("level-set axis crossings") {
  auto c1 = level_set(1.0, 501);
  double best = 1e300;
  for (auto [x, y] : c1.points)
    if (std::abs(y) < 1e-9) best = x;
  CHECK(best == doctest::Approx(-0.63336).epsilon(1e-4));

  auto ce = level_set(std::numbers::e, 101);
  bool near_branch = false;
  for (auto [x, y] : ce.points)
    if (std::abs(y) < 1e-9 && std::abs(x + kEInv) < 1e-4) near_branch = true;
  CHECK(near_branch);
}

TEST_CASE("level-set tangency near the origin") {
  auto c1 = level_set(1.0, 2001);
  // Points with tiny radius approach the lines y = +-x.
  int checked = 0;
  for (auto [x, y] : c1.points) {
    double r = std::hypot(x, y);
    if (r > 5e-3 || r < 1e-6) continue;
    CHECK(std::abs(std::abs(y) - std::abs(x)) < 0.05 * r + 1e-9);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("level-set nesting inside the unit-gain region") {
  for (double c : {0.5, 1.0, 2.0}) {
    auto ls = level_set(c, 201);
    for (auto [x, y] : ls.points) CHECK(s0_contains(x, y));
  }
  auto outside = level_set(-0.5, 201);
  int strict_out = 0;
  for (auto [x, y] : outside.points)
    if (!s0_contains(x, y)) ++strict_out;
  CHECK(strict_out == static_cast<int>(outside.points.size()));
}

TEST_CASE("region membership") {
  CHECK(s0_contains(0.0, 0.0));
  CHECK(s0_contains(-kPi / 2.0, 0.0));
  CHECK_FALSE(s0_contains(-kPi, 0.0));
  CHECK_FALSE(s0_contains(0.5, 0.0));
  CHECK(s0_contains(-0.3, 0.1));
}

TEST_CASE("region convexity") {
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> xs(-kPi / 2.0, 0.0), ys(-1.6, 1.6);
  int pairs = 0;
  while (pairs < 1000) {
    double x1 = xs(rng), y1 = ys(rng), x2 = xs(rng), y2 = ys(rng);
    if (!s0_contains(x1, y1) || !s0_contains(x2, y2)) continue;
    ++pairs;
    CHECK(s0_contains(0.5 * (x1 + x2), 0.5 * (y1 + y2)));
  }
}
