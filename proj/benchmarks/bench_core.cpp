#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kerr/evolve.hpp"
#include "kerr/fixtures.hpp"
#include "kerr/kdtree.hpp"
#include "kerr/lyapunov.hpp"
#include "kerr/spectrum.hpp"
#include "kerr/states.hpp"

namespace {

// Strong-coupling PACS, m = 1; nu sets the number of sectors.
void BM_EvolveSeries(benchmark::State& state) {
  const double nu = static_cast<double>(state.range(0));
  const auto psi = kerr::make_state(kerr::StateSpec::from_nu(kerr::StateKind::PhotonAdded, nu, 1));
  const kerr::ModelParams params{1.0, 1.0, 5.0, 1.0};
  kerr::EvolveOptions opt;
  opt.dt = 0.1;
  opt.steps = 10'000;
  for (auto _ : state) benchmark::DoNotOptimize(kerr::evolve_series(psi, params, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opt.steps));
}
BENCHMARK(BM_EvolveSeries)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_KdTreeNearest(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 50'000;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(n * dim);
  for (auto& v : pts) v = u(rng);
  const kerr::KdTree tree(std::move(pts), dim);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.nearest_to(i, 10));
    i = (i + 7919) % n;
  }
}
BENCHMARK(BM_KdTreeNearest)->Arg(2)->Arg(5)->Arg(8);

void BM_PowerSpectrum(benchmark::State& state) {
  const auto s = kerr::two_tone_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kerr::power_spectrum(s, s.size() / 4));
}
BENCHMARK(BM_PowerSpectrum)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Rosenstein(benchmark::State& state) {
  const auto s = kerr::logistic_fixture(100'000);
  kerr::RosensteinOptions opt;
  opt.dim = 1;
  opt.kmax = 50;
  for (auto _ : state) benchmark::DoNotOptimize(kerr::rosenstein_lambda(s, opt));
}
BENCHMARK(BM_Rosenstein)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
