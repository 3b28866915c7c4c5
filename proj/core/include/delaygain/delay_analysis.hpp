#pragma once

#include <utility>
#include <vector>

#include "delaygain/spectrum.hpp"

namespace delaygain {

/// Tunable solver tolerances, surfaced on the command line.
struct Tolerances {
  double root = 1e-12;          ///< bisection tolerance for scalar root finds
  double eig_residual = 1e-8;   ///< eigenpair residual bound, relative to ||A||_F
};
Tolerances& tolerances();

/// Delay quantities of a single mode alpha.
struct ModeAnalysis {
  Complex alpha;
  double tau_bar = 0;    ///< critical delay of the mode
  double tau_star = 0;   ///< gain-maximizing delay (0 out of cone)
  double tau_tilde = 0;  ///< largest delay with unit gain (0 out of cone)
  double eta = 0;        ///< delay where the mode rate drops to |Re alpha_1|
  bool in_cone = false;  ///< arg(alpha) strictly inside (3pi/4, 5pi/4)
};

struct Classification {
  std::vector<int> i1;     ///< modes tied with the rightmost real part (0-based)
  std::vector<int> i_in;   ///< modes inside the acceleration cone
  std::vector<int> i_out;  ///< complement of i_in
  bool can_accelerate = false;
};

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Whole-system verdict assembled by analyze().
struct SystemDelayAnalysis {
  double tau_bar = 0;
  double rho0 = 0;
  Classification classification;
  double tau_tilde = 0;
  Interval tau_star_bracket;
  double tau_star = 0;
  double rho_star = 0;
  std::vector<double> candidates;
  std::vector<ModeAnalysis> modes;
  bool rho_bound_exceeded = false;  ///< soft check of rho* <= e * rho0
};

/// Sampled rate-vs-delay data.  rho[j] is the columnwise minimum of
/// per_mode_rho[i][j].
struct RateProfile {
  std::vector<double> taus;
  std::vector<double> rho;
  std::vector<std::vector<double>> per_mode_rho;
};

/// One-sided derivative limits of the gain at the branch-point delay
/// tau = 1/(e |alpha|) of a real mode.
struct BranchPointLimits {
  double left;   ///< +infinity
  double right;  ///< -(5 e^2 |alpha|) / 3
};

/// True iff arg(alpha) lies strictly between 3pi/4 and 5pi/4.
bool in_acceleration_cone(const Complex& alpha);

/// g(alpha*tau) = Re(W0(alpha*tau)) / Re(alpha*tau), with g = 1 at tau = 0.
double delay_rate_gain(const Complex& alpha, double tau);

/// d g(alpha*tau) / d tau.  Raises NumericalError("branch-point") when
/// alpha*tau is within 1e-12 of -1/e; use gain_derivative_limits there.
double gain_derivative(const Complex& alpha, double tau);

/// One-sided limits at tau = 1/(e|alpha|) for real alpha < 0.
BranchPointLimits gain_derivative_limits(double alpha);

/// Critical delay of one mode: |atan(Re/Im)| / |alpha| (pi/(2|alpha|) if real).
double mode_critical_delay(const Complex& alpha);

/// Critical delay of the system: minimum over modes.
double critical_delay(const Spectrum& s);

/// (rho_tau, [rho^i_tau]) at a given delay; (|Re alpha_1|, [|Re alpha_i|]) at 0.
std::pair<double, std::vector<double>> rate_of_convergence(const Spectrum& s,
                                                           double tau);

Classification classify(const Spectrum& s);

/// Gain-maximizing delay of one mode; 0 when out of the cone, 1/(e|alpha|)
/// when real, otherwise via the polar-angle equation solved by bisection.
double mode_tau_star(const Complex& alpha);

/// The unique root of exp(-theta*cot(theta)) = cos(theta) in (0, pi).
double theta_tilde();

/// Largest delay with g = 1 for one mode; 0 out of cone.
double mode_tau_tilde(const Complex& alpha);

/// Unique root of g(alpha_i * tau) = |re_alpha1| / |Re alpha_i| on the
/// strictly decreasing segment of the mode gain.
double mode_eta(const Complex& alpha_i, double re_alpha1);

/// Largest delay at which the system rate still equals rho0 (min of the etas).
double system_tau_tilde(const Spectrum& s);

/// [min tau_i*, max tau_i*] intersected with (0, tau_tilde].
Interval tau_star_bracket(const Spectrum& s);

/// Discrete candidate delays for the rate maximizer: in-bracket mode optima
/// plus rising/falling intersections of per-mode rate curves.
std::vector<double> tau_star_candidates(const Spectrum& s);

/// (tau_star, rho_star).  (0, rho0) when acceleration is impossible;
/// closed forms for all-real spectra; candidate search plus golden-section
/// refinement otherwise.
std::pair<double, double> optimize_rate(const Spectrum& s);

RateProfile rate_profile(const Spectrum& s, double tau_max, int samples);

/// rho_tau for a real spectrum from its extreme eigenvalues only,
/// valid for 0 <= tau < pi / (2 |alphan|).
double real_spectrum_rate(double alpha1, double alphan, double tau);

/// Full per-mode and system-level report.
SystemDelayAnalysis analyze(const Spectrum& s);

}  // namespace delaygain
