#include "delaygain/delay_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "delaygain/errors.hpp"

namespace delaygain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

void require_stable(const Complex& alpha) {
  if (!(alpha.real() < 0.0))
    throw ValidationError("domain-error", "Re(alpha) must be negative");
}

// Bisection on [lo, hi] with f(lo), f(hi) of opposite (or zero) sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw NumericalError("no-bracket", "bisection interval does not bracket");
  const double tol = tolerances().root;
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  return bisect(f, lo, hi, f(lo), f(hi));
}

// Polar-angle map of the gain-stationary locus: theta in (3pi/4, 5pi/4)
// increases monotonically to the argument of alpha*tau at the stationary
// point.
double stationary_angle_map(double theta) {
  // arg(w e^w) = arg(w) + Im(w) for w = -cos(2 theta) (1 + i tan(theta)).
  return theta - std::cos(2.0 * theta) * std::tan(theta);
}

// arg(alpha) lifted into (3pi/4, 5pi/4) for in-cone alpha.
double lifted_arg(const Complex& alpha) {
  double a = std::arg(alpha);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Minimize f on [a, b] by golden-section search.
double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerances().root) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::pair<double, double> real_closed_forms(double alpha1, double alphan) {
  double gamma = alpha1 / alphan;  // in (0, 1]
  double mag1 = -alpha1;
  if (gamma > 1.0 - 1e-12) return {1.0 / (kE * mag1), kE * mag1};
  double s = std::sqrt(1.0 / (gamma * gamma) - 1.0);
  double a = std::acos(gamma);
  double rho_star = std::exp(a / s) * mag1;
  double tau_star = (a / (mag1 * s)) * std::exp(-a / s);
  return {tau_star, rho_star};
}

}  // namespace

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

bool in_acceleration_cone(const Complex& alpha) {
  return alpha.real() < 0.0 && std::abs(alpha.imag()) < -alpha.real();
}

double delay_rate_gain(const Complex& alpha, double tau) {
  require_stable(alpha);
  if (tau < 0.0) throw ValidationError("domain-error", "tau must be >= 0");
  if (tau == 0.0) return 1.0;
  Complex x = alpha * tau;
  return lambert_w0(x).real() / x.real();
}

double gain_derivative(const Complex& alpha, double tau) {
  require_stable(alpha);
  if (!(tau > 0.0)) throw ValidationError("domain-error", "tau must be > 0");
  Complex x = alpha * tau;
  if (std::abs(x + 1.0 / kE) <= 1e-12)
    throw NumericalError("branch-point",
                         "gain derivative singular at alpha*tau = -1/e");
  Complex w0 = lambert_w0(x);
  double w = w0.real(), u = w0.imag();
  double num = (w * w + u * u) * w + (w * w - u * u);
  double den = (w + 1.0) * (w + 1.0) + u * u;
  return -1.0 / (alpha.real() * tau * tau) * (num / den);
}

BranchPointLimits gain_derivative_limits(double alpha) {
  if (!(alpha < 0.0))
    throw ValidationError("domain-error", "alpha must be negative real");
  return {std::numeric_limits<double>::infinity(),
          -(5.0 * kE * kE * (-alpha)) / 3.0};
}

double mode_critical_delay(const Complex& alpha) {
  require_stable(alpha);
  double mag = std::abs(alpha);
  if (alpha.imag() == 0.0) return kPi / (2.0 * mag);
  return std::abs(std::atan(alpha.real() / alpha.imag())) / mag;
}

double critical_delay(const Spectrum& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& a : s.eigenvalues())
    best = std::min(best, mode_critical_delay(a));
  return best;
}

std::pair<double, std::vector<double>> rate_of_convergence(const Spectrum& s,
                                                           double tau) {
  std::vector<double> per_mode;
  per_mode.reserve(s.size());
  double sys = std::numeric_limits<double>::infinity();
  for (const Complex& a : s.eigenvalues()) {
    double r = delay_rate_gain(a, tau) * std::abs(a.real());
    per_mode.push_back(r);
    sys = std::min(sys, r);
  }
  return {sys, std::move(per_mode)};
}

Classification classify(const Spectrum& s) {
  Classification c;
  double re1 = std::abs(s[0].real());
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    if (std::abs(std::abs(s[i].real()) - re1) <= 1e-9 * re1)
      c.i1.push_back(i);
    if (in_acceleration_cone(s[i]))
      c.i_in.push_back(i);
    else
      c.i_out.push_back(i);
  }
  c.can_accelerate = std::includes(c.i_in.begin(), c.i_in.end(),
                                   c.i1.begin(), c.i1.end());
  return c;
}

double mode_tau_star(const Complex& alpha) {
  require_stable(alpha);
  if (!in_acceleration_cone(alpha)) return 0.0;
  double mag = std::abs(alpha);
  if (alpha.imag() == 0.0) return 1.0 / (kE * mag);
  double target = lifted_arg(alpha);
  double lo = 3.0 * kPi / 4.0 + 1e-12, hi = 5.0 * kPi / 4.0 - 1e-12;
  double theta = bisect(
      [&](double th) { return stationary_angle_map(th) - target; }, lo, hi);
  double c2 = std::cos(2.0 * theta);
  return -c2 / (mag * std::cos(theta)) * std::exp(-c2);
}

double theta_tilde() {
  static const double value = bisect(
      [](double th) {
        return std::exp(-th / std::tan(th)) - std::cos(th);
      },
      1e-9, kPi / 2.0 - 1e-9);
  return value;
}

double mode_tau_tilde(const Complex& alpha) {
  require_stable(alpha);
  if (!in_acceleration_cone(alpha)) return 0.0;
  double mag = std::abs(alpha);
  if (alpha.imag() == 0.0) {
    double th = theta_tilde();
    return th / std::tan(th) / mag;
  }
  double ts = mode_tau_star(alpha);
  double tb = mode_critical_delay(alpha);
  return bisect([&](double t) { return delay_rate_gain(alpha, t) - 1.0; },
                ts, tb);
}

double mode_eta(const Complex& alpha_i, double re_alpha1) {
  require_stable(alpha_i);
  if (!(re_alpha1 < 0.0) || std::abs(re_alpha1) > std::abs(alpha_i.real()) *
                                                      (1.0 + 1e-12))
    throw ValidationError("domain-error",
                          "|Re alpha_1| must not exceed |Re alpha_i|");
  double c = std::min(1.0, std::abs(re_alpha1) / std::abs(alpha_i.real()));
  double lo = in_acceleration_cone(alpha_i) ? mode_tau_star(alpha_i) : 0.0;
  double hi = mode_critical_delay(alpha_i);
  return bisect([&](double t) { return delay_rate_gain(alpha_i, t) - c; },
                lo, hi);
}

double system_tau_tilde(const Spectrum& s) {
  if (!classify(s).can_accelerate)
    throw ValidationError("not-accelerating",
                          "tau_tilde undefined when delay cannot accelerate");
  double re1 = s[0].real();
  double general = std::numeric_limits<double>::infinity();
  for (const Complex& a : s.eigenvalues())
    general = std::min(general, mode_eta(a, re1));
  if (s.all_real()) {
    double refined = std::min(mode_tau_tilde(s[0]),
                              mode_eta(s[s.size() - 1], re1));
    if (std::abs(refined - general) > 1e-9)
      throw NumericalError("tau-tilde-mismatch",
                           "real-spectrum refinement disagrees");
  }
  return general;
}

Interval tau_star_bracket(const Spectrum& s) {
  if (!classify(s).can_accelerate)
    throw ValidationError("not-accelerating",
                          "bracket undefined when delay cannot accelerate");
  double tt = system_tau_tilde(s);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Complex& a : s.eigenvalues()) {
    double ts = mode_tau_star(a);
    lo = std::min(lo, ts);
    hi = std::max(hi, ts);
  }
  Interval out{std::max(lo, 0.0), std::min(hi, tt)};
  if (!(out.hi > 0.0) || out.lo > out.hi)
    throw NumericalError("empty-bracket", "optimal-delay bracket is empty");
  return out;
}

std::vector<double> tau_star_candidates(const Spectrum& s) {
  if (!classify(s).can_accelerate)
    throw ValidationError("not-accelerating",
                          "candidates undefined when delay cannot accelerate");
  double tt = system_tau_tilde(s);
  const auto& eigs = s.eigenvalues();
  const int n = static_cast<int>(eigs.size());

  std::vector<double> cands;
  for (const Complex& a : eigs) {
    double ts = mode_tau_star(a);
    if (ts > 0.0 && ts < tt) cands.push_back(ts);
  }

  // Rising/falling intersections of per-mode rate curves.
  const int kScan = 2000;
  const double h = tt / kScan;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(eigs[i] - std::conj(eigs[j])) <= 1e-9 ||
          std::abs(eigs[i] - eigs[j]) <= 1e-9)
        continue;  // identical rate curves, no crossing information
      auto diff = [&](double t) {
        return delay_rate_gain(eigs[i], t) * std::abs(eigs[i].real()) -
               delay_rate_gain(eigs[j], t) * std::abs(eigs[j].real());
      };
      double prev_t = h, prev_f = diff(prev_t);
      for (int k = 2; k <= kScan; ++k) {
        double t = k * h, f = diff(t);
        if ((prev_f <= 0.0 && f > 0.0) || (prev_f >= 0.0 && f < 0.0)) {
          double root = bisect(diff, prev_t, t, prev_f, f);
          bool qualifying = false;
          try {
            double di = gain_derivative(eigs[i], root);
            double dj = gain_derivative(eigs[j], root);
            qualifying = (di > 0.0) != (dj > 0.0);
          } catch (const NumericalError&) {
            qualifying = true;  // branch point: keep, cheap to evaluate
          }
          if (qualifying && root > 0.0 && root < tt) cands.push_back(root);
        }
        prev_t = t;
        prev_f = f;
      }
    }
  }

  std::sort(cands.begin(), cands.end());
  std::vector<double> merged;
  for (double c : cands)
    if (merged.empty() || c - merged.back() > 1e-9) merged.push_back(c);
  return merged;
}

std::pair<double, double> optimize_rate(const Spectrum& s) {
  double rho0 = std::abs(s[0].real());
  if (!classify(s).can_accelerate) return {0.0, rho0};

  if (s.all_real()) {
    double alpha1 = s[0].real();
    double alphan = s[s.size() - 1].real();
    auto [tau_star, rho_star] = real_closed_forms(alpha1, alphan);
    double evaluated = rate_of_convergence(s, tau_star).first;
    // At the branch point alpha*tau = -1/e the W0 evaluation carries an
    // unavoidable sqrt(eps) error, so the cross-check loosens there.
    double tol = 1e-8;
    for (const Complex& a : s.eigenvalues())
      if (std::abs(a * tau_star + Complex(1.0 / kE, 0.0)) < 1e-6) tol = 1e-6;
    if (std::abs(evaluated - rho_star) > tol * std::max(1.0, rho_star))
      throw NumericalError("closed-form-mismatch",
                           "closed-form peak rate disagrees with evaluation");
    if (rho_star > kE * rho0 * (1.0 + 1e-9))
      throw NumericalError("rate-bound", "peak rate exceeds e * rho0");
    return {tau_star, rho_star};
  }

  auto rho_at = [&](double t) { return rate_of_convergence(s, t).first; };
  double tt = system_tau_tilde(s);

  double best_tau = 0.0, best_rho = rho0;
  for (double c : tau_star_candidates(s)) {
    double r = rho_at(c);
    if (r > best_rho) {
      best_rho = r;
      best_tau = c;
    }
  }

  // Safety net: dense sweep; refine wherever the grid beats the candidates.
  const int kSweep = 5000;
  double grid_best_tau = 0.0, grid_best_rho = rho0;
  for (int k = 1; k < kSweep; ++k) {
    double t = tt * k / kSweep;
    double r = rho_at(t);
    if (r > grid_best_rho) {
      grid_best_rho = r;
      grid_best_tau = t;
    }
  }
  if (grid_best_rho > best_rho + 1e-6 * rho0) {
    best_tau = grid_best_tau;
    best_rho = grid_best_rho;
  }

  if (best_tau > 0.0) {
    double half = tt / kSweep;
    double lo = std::max(best_tau - half, 0.0);
    double hi = std::min(best_tau + half, tt);
    double refined = golden_min([&](double t) { return -rho_at(t); }, lo, hi);
    double r = rho_at(refined);
    if (r >= best_rho) {
      best_tau = refined;
      best_rho = r;
    }
  }
  return {best_tau, best_rho};
}

RateProfile rate_profile(const Spectrum& s, double tau_max, int samples) {
  if (samples < 2)
    throw ValidationError("domain-error", "samples must be >= 2");
  if (!(tau_max > 0.0))
    throw ValidationError("domain-error", "tau_max must be positive");
  RateProfile p;
  p.taus.resize(samples);
  p.rho.resize(samples);
  p.per_mode_rho.assign(s.size(), std::vector<double>(samples));
  for (int j = 0; j < samples; ++j) {
    double t = tau_max * j / (samples - 1);
    p.taus[j] = t;
    auto [sys, per] = rate_of_convergence(s, t);
    p.rho[j] = sys;
    for (std::size_t i = 0; i < s.size(); ++i) p.per_mode_rho[i][j] = per[i];
  }
  return p;
}

double real_spectrum_rate(double alpha1, double alphan, double tau) {
  if (!(alphan <= alpha1 && alpha1 < 0.0))
    throw ValidationError("domain-error", "need alphan <= alpha1 < 0");
  if (!(tau >= 0.0 && tau < kPi / (2.0 * -alphan)))
    throw ValidationError("domain-error", "tau outside admissible range");
  if (tau == 0.0) return -alpha1;
  double tau_n = 1.0 / (kE * -alphan);
  double tau_1 = 1.0 / (kE * -alpha1);
  double r1 = delay_rate_gain(Complex(alpha1, 0.0), tau) * -alpha1;
  if (tau < tau_n) return r1;
  double rn = delay_rate_gain(Complex(alphan, 0.0), tau) * -alphan;
  if (tau <= tau_1) return std::min(r1, rn);
  return rn;
}

SystemDelayAnalysis analyze(const Spectrum& s) {
  SystemDelayAnalysis out;
  out.tau_bar = critical_delay(s);
  out.rho0 = std::abs(s[0].real());
  out.classification = classify(s);

  double re1 = s[0].real();
  for (const Complex& a : s.eigenvalues()) {
    ModeAnalysis m;
    m.alpha = a;
    m.in_cone = in_acceleration_cone(a);
    m.tau_bar = mode_critical_delay(a);
    m.tau_star = mode_tau_star(a);
    m.tau_tilde = mode_tau_tilde(a);
    m.eta = out.classification.can_accelerate ? mode_eta(a, re1) : 0.0;
    out.modes.push_back(m);
  }

  if (out.classification.can_accelerate) {
    out.tau_tilde = system_tau_tilde(s);
    out.tau_star_bracket = tau_star_bracket(s);
    out.candidates = tau_star_candidates(s);
  }
  auto [ts, rs] = optimize_rate(s);
  out.tau_star = ts;
  out.rho_star = rs;
  out.rho_bound_exceeded = rs > kE * out.rho0 * (1.0 + 1e-9);
  return out;
}

}  // namespace delaygain
