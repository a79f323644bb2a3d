#include <benchmark/benchmark.h>

#include "ipd/derham.hpp"
#include "ipd/periods.hpp"
#include "ipd/quadrature.hpp"
#include "ipd/verify.hpp"

using namespace ipd;

static void BM_H1BasisBessel(benchmark::State& state) {
  const Connection c = bessel_connection(ExactScalar(1));
  for (auto _ : state) benchmark::DoNotOptimize(h1_basis(c).h1_dim);
}
BENCHMARK(BM_H1BasisBessel);

static void BM_H1BasisCorpus(benchmark::State& state) {
  const auto corpus = random_corpus(0, 20);
  for (auto _ : state)
    for (const auto& c : corpus) benchmark::DoNotOptimize(h1_basis(c).h1_dim);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(corpus.size()));
}
BENCHMARK(BM_H1BasisCorpus)->Unit(benchmark::kMillisecond);

static void BM_ReduceForm(benchmark::State& state) {
  const Connection c = bessel_connection(ExactScalar(1));
  const auto basis = h1_basis(c);
  const auto form = RationalFunction::pole(ExactScalar(0), static_cast<int>(state.range(0)), ExactScalar(1));
  for (auto _ : state) benchmark::DoNotOptimize(reduce_form(c, basis, form));
}
BENCHMARK(BM_ReduceForm)->Arg(1)->Arg(2)->Arg(4);

static void BM_GaussKronrod(benchmark::State& state) {
  const ComplexIntegrand f = [](double t) { return std::exp(std::complex<double>(-t * t, t)); };
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_gauss_kronrod(f, -6, 6).value);
}
BENCHMARK(BM_GaussKronrod);

static void BM_IntegrateGaussian(benchmark::State& state) {
  const Connection c = gaussian_connection();
  const Cycle line = build_ray_pair(c, {Point::infinity(), kPi}, {Point::infinity(), 0});
  for (auto _ : state) benchmark::DoNotOptimize(integrate_cycle(c, line, RationalFunction(1)).value);
}
BENCHMARK(BM_IntegrateGaussian);

static void BM_IntegrateHankel(benchmark::State& state) {
  const Connection c = gamma_connection(ExactScalar::parse("1/3"));
  const Cycle cy = candidate_basis(c).at(0);
  const auto form = RationalFunction::pole(ExactScalar(0), 1, ExactScalar(1));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_cycle(c, cy, form).value);
}
BENCHMARK(BM_IntegrateHankel);

static void BM_PeriodMatrixBessel(benchmark::State& state) {
  const Connection c = bessel_connection(ExactScalar(1));
  const auto cycles = candidate_basis(c);
  const auto forms = h1_basis(c).basis_forms;
  for (auto _ : state) benchmark::DoNotOptimize(period_matrix(c, cycles, forms).rank);
}
BENCHMARK(BM_PeriodMatrixBessel);
BENCHMARK_MAIN();
