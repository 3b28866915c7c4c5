#include "delaygain/dde_sim.hpp"

#include <algorithm>
#include <cmath>

#include "delaygain/delay_analysis.hpp"
#include "delaygain/errors.hpp"
#include "delaygain/spectrum.hpp"

namespace delaygain {

PreShape PreShape::constant(Eigen::VectorXd value) {
  if (value.size() == 0)
    throw ValidationError("domain-error", "empty preshape vector");
  PreShape p;
  p.constant_ = true;
  p.values_.push_back(std::move(value));
  return p;
}

PreShape PreShape::sampled(std::vector<double> times,
                           std::vector<Eigen::VectorXd> values) {
  if (times.size() != values.size() || times.size() < 2)
    throw ValidationError("domain-error", "need >= 2 preshape samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("domain-error",
                            "preshape grid must be strictly increasing");
  PreShape p;
  p.times_ = std::move(times);
  p.values_ = std::move(values);
  return p;
}

Eigen::VectorXd PreShape::operator()(double t) const {
  if (constant_) return values_.front();
  if (t <= times_.front() + 1e-12 && t >= times_.front() - 1e-12)
    return values_.front();
  if (t < times_.front() || t > times_.back() + 1e-12)
    throw ValidationError("domain-error", "preshape evaluated outside domain");
  if (t >= times_.back()) return values_.back();
  std::size_t i = 1;
  while (times_[i] < t) ++i;
  double s = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
  return (1.0 - s) * values_[i - 1] + s * values_[i];
}

int PreShape::dimension() const {
  return static_cast<int>(values_.front().size());
}

namespace {

// Cubic Hermite value at parameter s in [0, 1] on an interval of width h.
Eigen::VectorXd hermite(const Eigen::VectorXd& x0, const Eigen::VectorXd& d0,
                        const Eigen::VectorXd& x1, const Eigen::VectorXd& d1,
                        double s, double h) {
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * d0 +
         (-2 * s3 + 3 * s2) * x1 + (s3 - s2) * h * d1;
}

}  // namespace

Trajectory simulate(const Eigen::MatrixXd& a, double tau, const PreShape& phi,
                    double horizon, int steps_per_delay) {
  if (a.rows() != a.cols())
    throw ValidationError("not-square", "system matrix must be square");
  if (phi.dimension() != a.rows())
    throw ValidationError("domain-error", "preshape dimension mismatch");
  if (!(tau > 0.0))
    throw ValidationError("domain-error", "tau must be positive");
  if (!(horizon >= tau))
    throw ValidationError("domain-error", "horizon must be >= tau");
  if (steps_per_delay < 4)
    throw ValidationError("domain-error", "steps_per_delay must be >= 4");

  Trajectory traj;
  traj.tau = tau;
  traj.steps_per_delay = steps_per_delay;
  traj.dimension = static_cast<int>(a.rows());
  try {
    traj.beyond_critical = tau >= critical_delay(Spectrum::of_matrix(a));
  } catch (const std::exception&) {
    traj.beyond_critical = false;  // marginal/unstable matrix: no verdict
  }

  const double h = tau / steps_per_delay;
  const int m = steps_per_delay;
  const int n_steps = static_cast<int>(std::ceil(horizon / h - 1e-9));

  std::vector<Eigen::VectorXd> states, derivs;
  states.reserve(n_steps + 1);
  derivs.reserve(n_steps + 1);
  states.push_back(phi(0.0));
  derivs.push_back(a * phi(-tau));

  auto delayed = [&](double td) -> Eigen::VectorXd {
    if (td <= 0.0) return phi(td);
    int i = static_cast<int>(td / h);
    if (i >= static_cast<int>(states.size()) - 1)
      i = static_cast<int>(states.size()) - 2;
    double s = td / h - i;
    return hermite(states[i], derivs[i], states[i + 1], derivs[i + 1], s, h);
  };

  for (int n = 0; n < n_steps; ++n) {
    double t = n * h;
    // The right-hand side depends on time only, so the classical 4th-order
    // step reduces to Simpson's rule on the delayed trace.
    Eigen::VectorXd k1 = derivs[n];
    Eigen::VectorXd kmid = a * delayed(t + 0.5 * h - tau);
    Eigen::VectorXd kend = a * delayed(t + h - tau);
    states.push_back(states[n] + (h / 6.0) * (k1 + 4.0 * kmid + kend));
    derivs.push_back((t + h - tau <= 0.0 || n + 1 - m < 0)
                         ? Eigen::VectorXd(a * phi(t + h - tau))
                         : Eigen::VectorXd(a * states[n + 1 - m]));
  }

  traj.times.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) traj.times[i] = i * h;
  traj.states = std::move(states);
  return traj;
}

Trajectory simulate_ode(const Eigen::MatrixXd& a, const Eigen::VectorXd& x0,
                        double horizon, int steps) {
  if (a.rows() != a.cols() || a.rows() != x0.size())
    throw ValidationError("domain-error", "matrix/state dimension mismatch");
  if (steps < 1 || !(horizon > 0.0))
    throw ValidationError("domain-error", "need positive horizon and steps");
  Trajectory traj;
  traj.tau = 0.0;
  traj.steps_per_delay = steps;
  traj.dimension = static_cast<int>(a.rows());
  double h = horizon / steps;
  traj.times.resize(steps + 1);
  traj.states.resize(steps + 1);
  traj.states[0] = x0;
  for (int n = 0; n < steps; ++n) {
    traj.times[n] = n * h;
    const Eigen::VectorXd& x = traj.states[n];
    Eigen::VectorXd k1 = a * x;
    Eigen::VectorXd k2 = a * (x + 0.5 * h * k1);
    Eigen::VectorXd k3 = a * (x + 0.5 * h * k2);
    Eigen::VectorXd k4 = a * (x + h * k3);
    traj.states[n + 1] = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  traj.times[steps] = horizon;
  return traj;
}

double estimate_decay_rate(const Trajectory& t, double tail_fraction,
                           const Eigen::VectorXd& offset) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
    throw ValidationError("domain-error", "tail_fraction must be in (0,1)");
  if (t.times.size() < 12)
    throw ValidationError("domain-error", "trajectory too short");

  const std::size_t n = t.times.size();
  std::vector<double> norm(n);
  for (std::size_t i = 0; i < n; ++i)
    norm[i] = (t.states[i] - offset).norm();

  double t_end = t.times.back();
  double start = (1.0 - tail_fraction) * t_end;

  // Samples whose disagreement norm has decayed to the rounding noise of the
  // stored states carry no rate information; drop them from the fit.
  double peak = *std::max_element(norm.begin(), norm.end());
  double floor = std::max(1e-300, 1e-13 * (offset.norm() + peak));

  // Oscillatory tails: widen the window to cover >= 3 envelope periods,
  // measured between local minima of the norm.
  std::vector<double> minima;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (t.times[i] >= start / 2.0 && norm[i] < norm[i - 1] &&
        norm[i] <= norm[i + 1])
      minima.push_back(t.times[i]);
  if (minima.size() >= 2) {
    double period = (minima.back() - minima.front()) /
                    static_cast<double>(minima.size() - 1);
    start = std::min(start, std::max(0.0, t_end - 3.0 * period));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.times[i] < start) continue;
    if (!(norm[i] > floor)) continue;
    double x = t.times[i], y = std::log(norm[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 10)
    throw NumericalError("estimation-unreliable",
                         "fewer than 10 usable tail samples");
  double denom = count * sxx - sx * sx;
  if (denom <= 0.0)
    throw NumericalError("estimation-unreliable", "degenerate fit window");
  double slope = (count * sxy - sx * sy) / denom;
  return -slope;
}

double estimate_decay_rate(const Trajectory& t, double tail_fraction) {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(t.dimension);
  return estimate_decay_rate(t, tail_fraction, zero);
}

}  // namespace delaygain
