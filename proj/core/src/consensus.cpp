#include "delaygain/consensus.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "json.hpp"

#include "delaygain/errors.hpp"
#include "delaygain/spectrum.hpp"

namespace delaygain {

namespace {

// Directed reachability from node 0 following edges j -> i (weights(i, j) > 0),
// optionally on the transpose.
int reachable_count(const Eigen::MatrixXd& w, bool reverse) {
  int n = static_cast<int>(w.rows());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u) {
      double edge = reverse ? w(v, u) : w(u, v);
      if (edge > 0.0 && !seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count;
}

}  // namespace

Digraph load_digraph(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("parse-error", e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
    throw ValidationError("parse-error", "expected object with n and edges");
  int n;
  try {
    n = doc.at("n").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("parse-error", e.what());
  }
  if (n < 1) throw ValidationError("parse-error", "n must be positive");

  Digraph g;
  g.n = n;
  g.weights = Eigen::MatrixXd::Zero(n, n);
  try {
    for (const auto& e : doc.at("edges")) {
      int from = e.at("from").get<int>();
      int to = e.at("to").get<int>();
      double w = e.at("weight").get<double>();
      if (from < 1 || from > n || to < 1 || to > n)
        throw ValidationError("parse-error", "edge endpoint out of range");
      if (from == to)
        throw ValidationError("parse-error", "self-loops not allowed");
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("parse-error", "edge weight must be >= 0");
      g.weights(to - 1, from - 1) = w;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("parse-error", e.what());
  }

  if (reachable_count(g.weights, false) != n ||
      reachable_count(g.weights, true) != n)
    throw ValidationError("not-strongly-connected",
                          "digraph is not strongly connected");

  for (int i = 0; i < n; ++i) {
    double out_sum = g.weights.col(i).sum();
    double in_sum = g.weights.row(i).sum();
    if (std::abs(out_sum - in_sum) > 1e-9)
      throw ValidationError("not-weight-balanced",
                            "node " + std::to_string(i + 1) +
                                " in/out weight mismatch");
  }
  return g;
}

Eigen::MatrixXd laplacian(const Digraph& g) {
  Eigen::VectorXd row_sums = g.weights.rowwise().sum();
  return Eigen::MatrixXd(row_sums.asDiagonal()) - g.weights;
}

ConsensusSetup reduce(const Eigen::MatrixXd& l) {
  const int n = static_cast<int>(l.rows());
  if (l.cols() != n || n < 2)
    throw ValidationError("domain-error", "need a square Laplacian, n >= 2");
  if ((l * Eigen::VectorXd::Ones(n)).norm() > 1e-10 ||
      (Eigen::RowVectorXd::Ones(n) * l).norm() > 1e-10)
    throw ValidationError("domain-error", "matrix lacks Laplacian zero sums");

  // Householder reflector mapping e1 to 1/sqrt(n) * 1; its trailing columns
  // complete that vector to an orthonormal basis.
  Eigen::VectorXd v = -Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  v(0) += 1.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  double vtv = v.squaredNorm();
  if (vtv > 1e-300) h -= (2.0 / vtv) * (v * v.transpose());

  ConsensusSetup setup;
  setup.laplacian = l;
  setup.basis = h.rightCols(n - 1);
  setup.reduced = -(setup.basis.transpose() * l * setup.basis);

  Eigen::MatrixXd full(n, n);
  full.col(0) = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  full.rightCols(n - 1) = setup.basis;
  if ((full.transpose() * full - Eigen::MatrixXd::Identity(n, n)).norm() >
      1e-12 * n)
    throw NumericalError("orthonormality", "reduction basis not orthonormal");

  // eig(A) must reproduce the nonzero eigenvalues of -L as a multiset.
  Eigen::EigenSolver<Eigen::MatrixXd> el(-l), ea(setup.reduced);
  std::vector<Complex> le, ae;
  for (int i = 0; i < n; ++i) le.push_back(el.eigenvalues()[i]);
  for (int i = 0; i < n - 1; ++i) ae.push_back(ea.eigenvalues()[i]);
  // Drop the eigenvalue of -L closest to zero (the consensus mode).
  std::size_t zi = 0;
  for (std::size_t i = 1; i < le.size(); ++i)
    if (std::abs(le[i]) < std::abs(le[zi])) zi = i;
  le.erase(le.begin() + zi);
  std::vector<bool> used(ae.size(), false);
  for (const Complex& x : le) {
    bool matched = false;
    for (std::size_t j = 0; j < ae.size(); ++j) {
      if (!used[j] && std::abs(ae[j] - x) <= 1e-8 * std::max(1.0, std::abs(x))) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched)
      throw NumericalError("reduction-spectrum",
                           "reduced matrix spectrum mismatch");
  }
  return setup;
}

std::pair<Trajectory, ConsensusReport> consensus_run(
    const Digraph& g, const Eigen::VectorXd& refs, double tau, double horizon) {
  if (refs.size() != g.n)
    throw ValidationError("domain-error", "reference vector length mismatch");
  if (tau < 0.0) throw ValidationError("domain-error", "tau must be >= 0");

  Eigen::MatrixXd l = laplacian(g);
  ConsensusSetup setup = reduce(l);
  Spectrum spec = Spectrum::of_matrix(setup.reduced);
  double tau_bar = critical_delay(spec);
  if (tau >= tau_bar)
    throw ValidationError("tau-exceeds-critical",
                          "tau >= critical delay " + std::to_string(tau_bar));

  ConsensusReport report;
  report.tau = tau;
  report.consensus_value = refs.mean();
  report.analysis = analyze(spec);
  report.analytic_rate =
      tau == 0.0 ? report.analysis.rho0 : rate_of_convergence(spec, tau).first;

  double rate_for_horizon = std::max(report.analytic_rate, 1e-6);
  if (!(horizon > 0.0))
    horizon = std::max(20.0 / rate_for_horizon, 10.0 * std::max(tau, 1e-3));

  Trajectory traj;
  if (tau == 0.0) {
    int steps = std::max(2000, static_cast<int>(horizon * 200));
    traj = simulate_ode(-l, refs, horizon, steps);
  } else {
    traj = simulate(-l, tau, PreShape::constant(refs), horizon, 200);
  }

  Eigen::VectorXd offset =
      Eigen::VectorXd::Constant(g.n, report.consensus_value);
  if ((refs - offset).norm() < 1e-14) {
    report.empirical_rate = 0.0;  // already at consensus; nothing to fit
  } else {
    report.empirical_rate = estimate_decay_rate(traj, 0.5, offset);
  }
  return {std::move(traj), std::move(report)};
}

}  // namespace delaygain
