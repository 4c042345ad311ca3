#include <benchmark/benchmark.h>

#include <vector>

#include "dsplit/baseline.hpp"
#include "dsplit/dsplit.hpp"
#include "dsplit/problems.hpp"

namespace {

using dsplit::Complex;

std::vector<Complex> initial_wave(const dsplit::SpectralGrid& grid) { return dsplit::wave_exact(0.0, grid); }

void BM_DSplitAdvection(benchmark::State& state, const char* scheme_name) {
  const auto n = static_cast<std::size_t>(state.range(0));
  dsplit::AdvectionRhs rhs(n);
  const auto scheme = dsplit::load_scheme(scheme_name);
  dsplit::DSplitStepper<Complex> stepper(scheme, n);
  stepper.load(initial_wave(rhs.grid()), 0.0);
  for (auto _ : state) {
    stepper.advance(rhs, 1e-4);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_DSplitAdvection, S2, "S2")->Arg(128)->Arg(1024);
BENCHMARK_CAPTURE(BM_DSplitAdvection, BM4, "BM4")->Arg(128)->Arg(1024);
BENCHMARK_CAPTURE(BM_DSplitAdvection, BM6, "BM6")->Arg(128)->Arg(1024);

void BM_Rk4Advection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  dsplit::AdvectionRhs rhs(n);
  dsplit::RkStepper<Complex> stepper(dsplit::builtin_tableau("RK4"), n);
  auto x = initial_wave(rhs.grid());
  for (auto _ : state) {
    stepper.step(rhs, 0.0, x, 1e-4);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Rk4Advection)->Arg(128)->Arg(1024);

void BM_WilliamsonAdvection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  dsplit::AdvectionRhs rhs(n);
  dsplit::LowStorageScheme w3;
  w3.name = "W3";
  w3.format = dsplit::LowStorageScheme::Format::williamson;
  w3.A = {0.0, -5.0 / 9.0, -153.0 / 128.0};
  w3.B = {1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0};
  w3.order = 3;
  dsplit::WilliamsonStepper<Complex> stepper(w3, n);
  auto x = initial_wave(rhs.grid());
  for (auto _ : state) {
    stepper.step(rhs, 0.0, x, 1e-4);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WilliamsonAdvection)->Arg(128)->Arg(1024);

void BM_FftForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  dsplit::FftPlan plan(n);
  std::vector<Complex> data(n, Complex(1.0, 0.5));
  for (auto _ : state) {
    plan.forward(data);
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(BM_FftForward)->Arg(128)->Arg(1024)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
