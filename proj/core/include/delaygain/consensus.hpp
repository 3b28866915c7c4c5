#pragma once

#include <string>

#include <Eigen/Dense>

#include "delaygain/dde_sim.hpp"
#include "delaygain/delay_analysis.hpp"

namespace delaygain {

/// Strongly connected, weight-balanced weighted digraph.
/// weights(i, j) > 0 means node j sends to node i.
struct Digraph {
  int n = 0;
  Eigen::MatrixXd weights;
};

/// Laplacian dynamics reduced to the delay-analysis form.
struct ConsensusSetup {
  Eigen::MatrixXd laplacian;  ///< L = diag(W 1) - W
  Eigen::MatrixXd reduced;    ///< A = -R^T L R, (n-1) x (n-1)
  Eigen::MatrixXd basis;      ///< R, n x (n-1); [1/sqrt(n) 1, R] orthonormal
};

struct ConsensusReport {
  double consensus_value = 0;   ///< mean of the references
  double empirical_rate = 0;    ///< fitted decay rate of ||x - mean 1||
  double analytic_rate = 0;     ///< rho_tau of the reduced matrix
  double tau = 0;
  SystemDelayAnalysis analysis; ///< full delay analysis of the reduced matrix
};

/// Parse and validate a digraph document:
/// {"n": N, "edges": [{"from": i, "to": j, "weight": w}, ...]}, 1-based.
/// Errors: "parse-error", "not-strongly-connected", "not-weight-balanced".
Digraph load_digraph(const std::string& json_text);

Eigen::MatrixXd laplacian(const Digraph& g);

/// Deterministic reduction via the Householder reflector mapping e1 to
/// 1/sqrt(n) 1; verifies orthonormality, L's zero sums, and the eigenvalue
/// multiset identity eig(A) = nonzero eig(-L).
ConsensusSetup reduce(const Eigen::MatrixXd& l);

/// Simulate dx/dt = -L x(t - tau) from the constant preshape refs and report
/// empirical vs analytic agreement rates.  tau = 0 runs the ODE limit.
/// Refuses tau >= critical delay of the reduced matrix.
std::pair<Trajectory, ConsensusReport> consensus_run(const Digraph& g,
                                                     const Eigen::VectorXd& refs,
                                                     double tau, double horizon);

}  // namespace delaygain
