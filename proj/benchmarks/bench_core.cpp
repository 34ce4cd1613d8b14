#include <benchmark/benchmark.h>

#include <kz/coefficients.hpp>
#include <kz/engine.hpp>
#include <kz/hardy.hpp>
#include <kz/identities.hpp>
#include <kz/linalg.hpp>
#include <kz/measures.hpp>
#include <kz/random.hpp>

namespace {

kz::SpectralMeasure two_atoms() {
  return kz::SpectralMeasure::atomic({{kz::AtomLocation::rational(0, 1), 0.5},
                                      {kz::AtomLocation::rational(1, 2), 0.5}});
}

void bm_alpha_recursive(benchmark::State& state) {
  const auto mu = two_atoms();
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kz::alpha_recursive(mu, 0.8, order));
  }
}
BENCHMARK(bm_alpha_recursive)->Arg(256)->Arg(1024)->Arg(4096);

void bm_pseudoinverse(benchmark::State& state) {
  kz::Rng rng(7);
  const int n = static_cast<int>(state.range(0));
  kz::ComplexOperator a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.complex_gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kz::pseudoinverse(a));
  }
}
BENCHMARK(bm_pseudoinverse)->Arg(8)->Arg(32)->Arg(64);

void bm_engine_run(benchmark::State& state) {
  kz::Rng rng(11);
  const auto mu = kz::random_atomic_measure(rng, 5);
  const auto k = state.range(0);
  const kz::L2Embedding emb(mu, static_cast<int>(k));
  const auto tasks = kz::exponential_tasks(emb, static_cast<int>(k));
  const auto w = kz::random_unit_vector(rng, emb.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kz::run(tasks, w, 1.0, kz::NoiseModel::none(), k));
  }
}
BENCHMARK(bm_engine_run)->Arg(1000)->Arg(10000);

void bm_chain_build(benchmark::State& state) {
  kz::Rng rng(13);
  const int dim = 16;
  const int len = static_cast<int>(state.range(0));
  std::vector<kz::ComplexOperator> ps;
  for (int i = 0; i < len; ++i) ps.push_back(kz::random_projector(rng, dim, 3));
  const kz::ProjectionSequence seq(std::move(ps), 1.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kz::build_chain(seq, len));
  }
}
BENCHMARK(bm_chain_build)->Arg(16)->Arg(50);

void bm_boundary_quadrature(benchmark::State& state) {
  const auto mu = two_atoms();
  const std::vector<double> radii{0.9, 0.99, 0.999};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kz::coefficient_sum_vs_boundary(mu, 0.8, static_cast<int>(state.range(0)), radii));
  }
}
BENCHMARK(bm_boundary_quadrature)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
