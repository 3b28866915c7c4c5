#include <benchmark/benchmark.h>

#include <random>

#include "delaygain/dde_sim.hpp"
#include "delaygain/delay_analysis.hpp"
#include "delaygain/lambertw.hpp"

using namespace delaygain;

namespace {

Spectrum bench_spectrum() {
  return Spectrum::of_values(
      {{-1.05, 0.0}, {-1.47, 0.18}, {-1.47, -0.18}, {-1.7, 0.0}});
}

void bm_lambert_w0(benchmark::State& state) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  std::vector<Complex> zs(1024);
  for (auto& z : zs) z = {d(rng), d(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w0(zs[i++ & 1023]));
  }
}
BENCHMARK(bm_lambert_w0);

void bm_rate_of_convergence(benchmark::State& state) {
  Spectrum s = bench_spectrum();
  double tau = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rate_of_convergence(s, tau));
  }
}
BENCHMARK(bm_rate_of_convergence);

void bm_optimize_rate(benchmark::State& state) {
  Spectrum s = bench_spectrum();
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_rate(s));
  }
}
BENCHMARK(bm_optimize_rate);

void bm_simulate(benchmark::State& state) {
  Eigen::MatrixXd a(2, 2);
  a << -1.0, 0.5, -0.3, -1.4;
  PreShape phi = PreShape::constant(Eigen::VectorXd::Ones(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(a, 0.3, phi, 10.0, 100));
  }
}
BENCHMARK(bm_simulate);

}  // namespace

BENCHMARK_MAIN();
