// Microbenchmarks for the kernels the sampler spends its time in.  Run
// manually: build/benchmarks/hiwish_bench [--benchmark_filter=...].

#include <benchmark/benchmark.h>

#include <cstdint>

#include "hiwish/distributions.hpp"
#include "hiwish/gibbs.hpp"
#include "hiwish/matrix.hpp"
#include "hiwish/models.hpp"
#include "hiwish/rng.hpp"

namespace {

hiwish::SpdMatrix random_spd_matrix(std::uint64_t seed, std::size_t p) {
  hiwish::RngStream rng(seed);
  hiwish::Matrix g(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      g(i, j) = hiwish::sample_standard_normal(rng);
    }
  }
  hiwish::Matrix m = g * g.transpose();
  for (std::size_t i = 0; i < p; ++i) m(i, i) += 0.5 * static_cast<double>(p);
  return hiwish::SpdMatrix(m);
}

void BM_Cholesky(benchmark::State &state) {
  const hiwish::SpdMatrix m =
      random_spd_matrix(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::cholesky(m));
  }
}
BENCHMARK(BM_Cholesky)->Arg(5)->Arg(20)->Arg(50);

void BM_SpdInverse(benchmark::State &state) {
  const hiwish::SpdMatrix m =
      random_spd_matrix(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::spd_inverse(m));
  }
}
BENCHMARK(BM_SpdInverse)->Arg(5)->Arg(20);

void BM_SymmetricEigen(benchmark::State &state) {
  const hiwish::SpdMatrix m =
      random_spd_matrix(3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::symmetric_eigen(m.mat()));
  }
}
BENCHMARK(BM_SymmetricEigen)->Arg(5)->Arg(20)->Arg(50);

void BM_SampleGamma(benchmark::State &state) {
  hiwish::RngStream rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::sample_gamma(rng, 5.0, 2.0));
  }
}
BENCHMARK(BM_SampleGamma);

void BM_SampleWishart(benchmark::State &state) {
  hiwish::RngStream rng(5);
  const hiwish::WishartParams params(12.0, random_spd_matrix(6, 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::sample_wishart(rng, params));
  }
}
BENCHMARK(BM_SampleWishart);

void BM_SampleInverseWishartDraw(benchmark::State &state) {
  hiwish::RngStream rng(7);
  const hiwish::SpdMatrix scale = random_spd_matrix(8, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::sample_inverse_wishart_draw(rng, 25.0, scale));
  }
}
BENCHMARK(BM_SampleInverseWishartDraw);

void BM_EstimateGammaVariance(benchmark::State &state) {
  const hiwish::SpdMatrix sigma = random_spd_matrix(9, 5);
  const hiwish::BetaConditional target = hiwish::make_beta_conditional(
      hiwish::ModelSpec::model2(), hiwish::log_det(sigma),
      hiwish::DiagMatrix(5, 1.5));
  const hiwish::SamplerConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hiwish::estimate_gamma_variance(target, config));
  }
}
BENCHMARK(BM_EstimateGammaVariance);

void BM_MetropolisBetaStep(benchmark::State &state) {
  hiwish::RngStream rng(10);
  const hiwish::ModelSpec spec = hiwish::ModelSpec::model2();
  hiwish::ChainState chain{random_spd_matrix(11, 5),
                           hiwish::HyperState{8.0, hiwish::DiagMatrix(5, 1.5)}};
  const hiwish::SamplerConfig config;
  for (auto _ : state) {
    const hiwish::BetaStepResult step =
        hiwish::metropolis_beta_step(spec, chain, config, rng);
    chain.hyper.beta = step.beta;
    benchmark::DoNotOptimize(chain.hyper.beta);
  }
}
BENCHMARK(BM_MetropolisBetaStep);

// A full short chain on study-sized input; items processed counts chain
// iterations, so the per-item time is the cost of one Gibbs sweep.
void BM_RunChain(benchmark::State &state) {
  hiwish::RngStream data_rng(12);
  const hiwish::Matrix data =
      hiwish::sample_mvn_zero(data_rng, random_spd_matrix(13, 5), 20);
  const hiwish::Matrix scatter = hiwish::scatter_matrix(data);
  hiwish::SamplerConfig config;
  config.iterations = 200;
  config.burn_in = 100;
  hiwish::RngStream rng(14);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hiwish::run_chain(hiwish::ModelSpec::model2(), scatter, 20, config, rng));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(config.iterations));
}
BENCHMARK(BM_RunChain);

}  // namespace

BENCHMARK_MAIN();
