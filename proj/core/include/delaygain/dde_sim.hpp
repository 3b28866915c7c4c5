#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace delaygain {

/// Initial history on [-tau, 0].  Constant preshapes carry one vector;
/// sampled preshapes interpolate linearly over a strictly increasing grid
/// spanning the whole domain.
class PreShape {
 public:
  static PreShape constant(Eigen::VectorXd value);
  static PreShape sampled(std::vector<double> times,
                          std::vector<Eigen::VectorXd> values);

  /// Evaluate at t in [-tau, 0] (clamped at the ends within 1e-12).
  Eigen::VectorXd operator()(double t) const;
  int dimension() const;
  bool is_constant() const noexcept { return constant_; }

 private:
  PreShape() = default;
  bool constant_ = false;
  std::vector<double> times_;
  std::vector<Eigen::VectorXd> values_;
};

/// Solution samples of dx/dt = A x(t - tau) on a uniform grid of step
/// tau / steps_per_delay starting at t = 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  double tau = 0;
  int steps_per_delay = 0;
  int dimension = 0;
  bool beyond_critical = false;  ///< tau >= critical delay of A (divergent run)
};

/// Method-of-steps integration with classical 4th-order steps; the delayed
/// state is read from a cubic Hermite dense interpolant of the already
/// computed segment (or the preshape on the first interval).
Trajectory simulate(const Eigen::MatrixXd& a, double tau, const PreShape& phi,
                    double horizon, int steps_per_delay);

/// Reference integrator for the tau = 0 limit: dx/dt = A x, classical RK4.
Trajectory simulate_ode(const Eigen::MatrixXd& a, const Eigen::VectorXd& x0,
                        double horizon, int steps);

/// Negated least-squares slope of log ||x(t) - offset|| over the trailing
/// tail_fraction of the horizon.  The window widens automatically to span at
/// least three oscillation periods when the tail oscillates.  Positive result
/// means decay; a growing tail yields a negative rate (not an error).
double estimate_decay_rate(const Trajectory& t, double tail_fraction,
                           const Eigen::VectorXd& offset);
double estimate_decay_rate(const Trajectory& t, double tail_fraction = 0.5);

}  // namespace delaygain
