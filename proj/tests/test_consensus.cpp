#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "delaygain/consensus.hpp"
#include "delaygain/errors.hpp"
#include "delaygain/spectrum.hpp"

using namespace delaygain;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string two_cycle() {
  return R"({"n":2,"edges":[{"from":1,"to":2,"weight":1.0},
                            {"from":2,"to":1,"weight":1.0}]})";
}

// Random strongly connected balanced digraph: a directed ring plus extra
// cycles, each contributing equal in/out weight at every visited node.
std::string random_balanced(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> w(0.2, 1.5);
  std::ostringstream out;
  out << "{\"n\":" << n << ",\"edges\":[";
  bool first = true;
  auto edge = [&](int from, int to, double weight) {
    if (!first) out << ",";
    first = false;
    out << "{\"from\":" << from << ",\"to\":" << to
        << ",\"weight\":" << weight << "}";
  };
  double ring = w(rng);
  for (int i = 1; i <= n; ++i) edge(i, i % n + 1, ring);
  double chord = w(rng);
  if (n >= 3)
    for (int i = 1; i <= n; ++i) edge(i, (i + 1) % n + 1, chord);
  out << "]}";
  return out.str();
}

}  // namespace

TEST_CASE("digraph loading and validation") {
  Digraph g = load_digraph(two_cycle());
  CHECK(g.n == 2);
  CHECK(g.weights(1, 0) == 1.0);
  CHECK(g.weights(0, 1) == 1.0);

  CHECK_THROWS_WITH_AS(load_digraph("{"), doctest::Contains("parse-error"),
                       ValidationError);
  // Isolated sink: node 3 receives but never sends.
  CHECK_THROWS_AS(
      load_digraph(R"({"n":3,"edges":[{"from":1,"to":2,"weight":1},
        {"from":2,"to":1,"weight":1},{"from":1,"to":3,"weight":1}]})"),
      ValidationError);
  // Unbalanced node.
  CHECK_THROWS_AS(
      load_digraph(R"({"n":2,"edges":[{"from":1,"to":2,"weight":1},
        {"from":2,"to":1,"weight":0.5}]})"),
      ValidationError);
}

TEST_CASE("laplacian construction") {
  Eigen::MatrixXd l = laplacian(load_digraph(two_cycle()));
  CHECK(l(0, 0) == 1.0);
  CHECK(l(0, 1) == -1.0);
  CHECK(l(1, 0) == -1.0);
  CHECK(l(1, 1) == 1.0);

  // Complete 3-node digraph with unit weights: L = 2I - (J - I).
  Digraph k3 = load_digraph(
      R"({"n":3,"edges":[{"from":1,"to":2,"weight":1},{"from":2,"to":1,"weight":1},
          {"from":2,"to":3,"weight":1},{"from":3,"to":2,"weight":1},
          {"from":1,"to":3,"weight":1},{"from":3,"to":1,"weight":1}]})");
  Eigen::MatrixXd l3 = laplacian(k3);
  Eigen::MatrixXd expected =
      3.0 * Eigen::MatrixXd::Identity(3, 3) - Eigen::MatrixXd::Ones(3, 3);
  CHECK((l3 - expected).norm() < 1e-12);
  CHECK((l3 * Eigen::VectorXd::Ones(3)).norm() < 1e-12);
}

TEST_CASE("reduction to the delay-analysis form") {
  ConsensusSetup s = reduce(laplacian(load_digraph(two_cycle())));
  REQUIRE(s.reduced.rows() == 1);
  CHECK(s.reduced(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));

  // Orthonormality of [1/sqrt(n) 1, R].
  int n = 5;
  std::mt19937 rng(9);
  Digraph g = load_digraph(random_balanced(rng, n));
  ConsensusSetup setup = reduce(laplacian(g));
  Eigen::MatrixXd full(n, n);
  full.col(0) = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  full.rightCols(n - 1) = setup.basis;
  CHECK((full.transpose() * full - Eigen::MatrixXd::Identity(n, n)).norm() <
        1e-12);

  // eig(A) + {0} = eig(-L) as multisets.
  Eigen::EigenSolver<Eigen::MatrixXd> el(-setup.laplacian);
  Eigen::EigenSolver<Eigen::MatrixXd> ea(setup.reduced);
  std::vector<Complex> le, ae;
  for (int i = 0; i < n; ++i) le.push_back(el.eigenvalues()[i]);
  for (int i = 0; i < n - 1; ++i) ae.push_back(ea.eigenvalues()[i]);
  ae.push_back({0.0, 0.0});
  auto key = [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(le.begin(), le.end(), key);
  std::sort(ae.begin(), ae.end(), key);
  for (int i = 0; i < n; ++i) CHECK(std::abs(le[i] - ae[i]) < 1e-8);
}

TEST_CASE("reference digraphs reproduce their design spectra") {
  Digraph g1 = load_digraph(read_file(DELAYGAIN_DATA_DIR "/case1_digraph.json"));
  Spectrum s1 = Spectrum::of_matrix(reduce(laplacian(g1)).reduced);
  REQUIRE(s1.size() == 4);
  CHECK(std::abs(s1[0] - Complex(-1.5, 0.0)) < 1e-9);
  CHECK(std::abs(s1[1] - Complex(-1.5, 0.0)) < 1e-9);
  CHECK(std::abs(s1[2] - Complex(-2.0, 0.0)) < 1e-9);
  CHECK(std::abs(s1[3] - Complex(-2.5, 0.0)) < 1e-9);

  Digraph g2 = load_digraph(read_file(DELAYGAIN_DATA_DIR "/case2_digraph.json"));
  Spectrum s2 = Spectrum::of_matrix(reduce(laplacian(g2)).reduced);
  REQUIRE(s2.size() == 4);
  CHECK(std::abs(s2[0].real() - -0.69) < 0.01);
  CHECK(std::abs(std::abs(s2[0].imag()) - 0.95) < 0.01);
  CHECK(std::abs(s2[2].real() - -1.80) < 0.01);
  CHECK(std::abs(std::abs(s2[2].imag()) - 0.58) < 0.01);
  CHECK_FALSE(classify(s2).can_accelerate);
}

TEST_CASE("consensus runs converge to the average") {
  Digraph g = load_digraph(read_file(DELAYGAIN_DATA_DIR "/case1_digraph.json"));
  Eigen::VectorXd refs(5);
  refs << 1, 2, 3, 4, 5;

  auto [traj0, rep0] = consensus_run(g, refs, 0.0, 15.0);
  CHECK(rep0.consensus_value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((traj0.states.back() -
         Eigen::VectorXd::Constant(5, 3.0)).norm() < 1e-6);
  CHECK(rep0.empirical_rate == doctest::Approx(1.5).epsilon(0.02));

  auto [trajd, repd] = consensus_run(g, refs, 0.23, 15.0);
  CHECK(repd.empirical_rate / rep0.empirical_rate >= 1.8);
  CHECK(repd.empirical_rate ==
        doctest::Approx(repd.analytic_rate).epsilon(0.05));

  // Already at consensus: the trajectory stays put.
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(5, 2.5);
  auto [trajf, repf] = consensus_run(g, flat, 0.2, 5.0);
  for (const auto& x : trajf.states)
    CHECK((x - flat).norm() < 1e-9);
}

TEST_CASE("delay slows the non-accelerating reference digraph") {
  Digraph g = load_digraph(read_file(DELAYGAIN_DATA_DIR "/case2_digraph.json"));
  Eigen::VectorXd refs(5);
  refs << 2, -1, 0.5, 4, 1;
  auto [t0, r0] = consensus_run(g, refs, 0.0, 0.0);
  auto [t3, r3] = consensus_run(g, refs, 0.3, 0.0);
  CHECK(r3.empirical_rate / r0.empirical_rate < 1.0);
  CHECK_FALSE(r3.analysis.classification.can_accelerate);
}

TEST_CASE("trajectory conserves the state sum") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 3 + trial % 3;
    Digraph g = load_digraph(random_balanced(rng, n));
    Eigen::VectorXd refs(n);
    for (int i = 0; i < n; ++i) refs(i) = std::uniform_real_distribution<double>(-2, 2)(rng);
    Spectrum s = Spectrum::of_matrix(reduce(laplacian(g)).reduced);
    double tb = critical_delay(s);
    for (double f : {0.3, 0.7}) {
      auto [traj, rep] = consensus_run(g, refs, f * tb, 0.0);
      double sum0 = refs.sum();
      for (const auto& x : traj.states)
        CHECK(x.sum() == doctest::Approx(sum0).epsilon(1e-8));
      // Reduction consistency: disagreement decays at the analytic rate.
      CHECK(std::abs(rep.empirical_rate - rep.analytic_rate) /
                rep.analytic_rate <=
            0.05);
    }
  }
}

TEST_CASE("excessive delay is refused with the critical value") {
  Digraph g = load_digraph(two_cycle());
  Eigen::VectorXd refs(2);
  refs << 1.0, -1.0;
  CHECK_THROWS_WITH_AS(consensus_run(g, refs, 10.0, 1.0),
                       doctest::Contains("critical"), ValidationError);
}
