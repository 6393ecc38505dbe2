#include <benchmark/benchmark.h>

#include <random>

#include "ripgate/cascade.hpp"
#include "ripgate/dpa.hpp"
#include "ripgate/params.hpp"
#include "ripgate/sparse.hpp"

using namespace ripgate;
using sparse::CMatRM;
using cd = std::complex<double>;

namespace {

cascade::PairGenerator fixture_generator(int nc, int ns) {
  SystemParams p;
  DpaParams src = dpa::calibrate_pump(16.0, 32.0, 0.0);
  return cascade::make_pair_generator(p, src, {nc, ns}, +2, 0);
}

CMatRM random_block(int dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  CMatRM m(dim, dim);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = cd(gauss(rng), gauss(rng));
  return m;
}

}  // namespace

static void BandedLeftProduct(benchmark::State& state) {
  const auto gen = fixture_generator(int(state.range(0)), int(state.range(1)));
  CMatRM x = random_block(gen.dim);
  CMatRM y = CMatRM::Zero(gen.dim, gen.dim);
  for (auto _ : state) {
    sparse::banded_left_product(y, cd(1.0, 0.0), gen.a0, x, true);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * gen.a0.bands.size() * gen.dim * gen.dim);
}
BENCHMARK(BandedLeftProduct)->Args({20, 12})->Args({32, 16});

static void BandedRightProduct(benchmark::State& state) {
  const auto gen = fixture_generator(int(state.range(0)), int(state.range(1)));
  CMatRM x = random_block(gen.dim);
  CMatRM y = CMatRM::Zero(gen.dim, gen.dim);
  for (auto _ : state) {
    sparse::banded_right_product(y, cd(1.0, 0.0), x, gen.b0, true);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * gen.b0.bands.size() * gen.dim * gen.dim);
}
BENCHMARK(BandedRightProduct)->Args({20, 12})->Args({32, 16});

static void GeneratorRhs(benchmark::State& state) {
  const auto gen = fixture_generator(int(state.range(0)), int(state.range(1)));
  CMatRM x = random_block(gen.dim);
  CMatRM y(gen.dim, gen.dim), scratch(gen.dim, gen.dim);
  for (auto _ : state) {
    cascade::evaluate_rhs(gen, x, 3.0, y, scratch);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(GeneratorRhs)->Args({20, 12})->Args({24, 14})->Args({32, 16});

BENCHMARK_MAIN();
