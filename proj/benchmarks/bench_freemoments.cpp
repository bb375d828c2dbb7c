#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "freemoments/ensemble.hpp"
#include "freemoments/families.hpp"
#include "freemoments/geometry.hpp"
#include "freemoments/moments.hpp"
#include "freemoments/wavefunction.hpp"
#include "freemoments/wigner.hpp"

namespace {

fm::MomentVector sample_moments(int n) {
  std::mt19937_64 rng(7 + static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (auto& c : v) c = unit(rng);
  v.back() = 1.0 + std::fabs(v.back());
  return fm::MomentVector(n, std::move(v));
}

void bm_propagate(benchmark::State& state) {
  const auto y = sample_moments(static_cast<int>(state.range(0)));
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(fm::propagate(y, t));
  }
}
BENCHMARK(bm_propagate)->Arg(4)->Arg(6);

void bm_invariants(benchmark::State& state) {
  const auto y = sample_moments(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fm::invariants(y));
}
BENCHMARK(bm_invariants)->Arg(4)->Arg(6);

void bm_classify_fourth(benchmark::State& state) {
  const auto y = fm::MomentVector(4, {2.0, 0.3, -0.5, 0.1, 1.2});
  for (auto _ : state) benchmark::DoNotOptimize(fm::classify_fourth(y));
}
BENCHMARK(bm_classify_fourth);

void bm_cubic_real_roots(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fm::cubic_real_roots(1.0, -0.7, 0.11));
}
BENCHMARK(bm_cubic_real_roots);

void bm_measure_moments(benchmark::State& state) {
  const auto psi = fm::SkewGaussian{0.671}.grid(static_cast<std::size_t>(state.range(0)), 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(fm::measure_moments(psi, 4));
}
BENCHMARK(bm_measure_moments)->Arg(1024)->Arg(4096);

void bm_free_propagate(benchmark::State& state) {
  const auto psi = fm::Gaussian{1.0}.grid(static_cast<std::size_t>(state.range(0)), 30.0);
  for (auto _ : state) benchmark::DoNotOptimize(fm::free_propagate(psi, 1.0));
}
BENCHMARK(bm_free_propagate)->Arg(4096);

void bm_wigner_transform(benchmark::State& state) {
  const auto psi = fm::SkewGaussian{0.671}.grid(static_cast<std::size_t>(state.range(0)), 24.0);
  for (auto _ : state) benchmark::DoNotOptimize(fm::wigner_transform(psi));
}
BENCHMARK(bm_wigner_transform)->Arg(256)->Arg(1024);

void bm_ensemble_moments(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const auto e =
      fm::random_ensemble(rng, static_cast<std::size_t>(state.range(0)), 0, 1.5, 0, 0.8, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(fm::ensemble_moments(e, 4));
}
BENCHMARK(bm_ensemble_moments)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
