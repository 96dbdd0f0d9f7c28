// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "agla/io.hpp"
#include "agla/kernels.hpp"
#include "agla/linops.hpp"

namespace {

using namespace agla;
using kernels::Execution;

struct Setup {
  kernels::GaborLattice lat;
  RealVec window;
  kernels::Fft fft;
  CoefVec x, c;
  RealVec s;

  explicit Setup(std::size_t length)
      : lat{length, 32, 256},
        window(periodic_gaussian(length, 32.0 * 256.0 / double(length))),
        fft(256),
        x(length),
        c(lat.coefficients()),
        s(lat.coefficients()) {
    io::Rng rng(1);
    for (auto& z : x) z = {rng.normal(), 0.0};
    for (auto& z : c) z = {rng.normal(), rng.normal()};
    for (auto& v : s) v = rng.uniform();
  }
};

void BM_analysis(benchmark::State& state, Execution ex) {
  Setup su(static_cast<std::size_t>(state.range(0)));
  CoefVec out(su.lat.coefficients());
  for (auto _ : state) {
    kernels::dgt_analysis(ex, su.lat, su.window, su.fft, su.x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(su.lat.coefficients()));
}

void BM_synthesis(benchmark::State& state, Execution ex) {
  Setup su(static_cast<std::size_t>(state.range(0)));
  CoefVec out(su.lat.length);
  for (auto _ : state) {
    kernels::dgt_synthesis(ex, su.lat, su.window, su.fft, su.c, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(su.lat.coefficients()));
}

void BM_magnitude(benchmark::State& state, Execution ex) {
  Setup su(static_cast<std::size_t>(state.range(0)));
  CoefVec out(su.c.size());
  for (auto _ : state) {
    kernels::project_magnitude(ex, su.c, su.s, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(su.c.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_analysis, serial, Execution::serial)->Arg(4096)->Arg(32768);
BENCHMARK_CAPTURE(BM_analysis, parallel, Execution::parallel)->Arg(4096)->Arg(32768);
BENCHMARK_CAPTURE(BM_synthesis, serial, Execution::serial)->Arg(4096)->Arg(32768);
BENCHMARK_CAPTURE(BM_synthesis, parallel, Execution::parallel)->Arg(4096)->Arg(32768);
BENCHMARK_CAPTURE(BM_magnitude, serial, Execution::serial)->Arg(4096)->Arg(32768);
BENCHMARK_CAPTURE(BM_magnitude, parallel, Execution::parallel)->Arg(4096)->Arg(32768);

BENCHMARK_MAIN();
