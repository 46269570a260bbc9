#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "cmm/biot_savart.hpp"
#include "cmm/diagnostics.hpp"
#include "cmm/flowmap.hpp"
#include "cmm/init_fields.hpp"

using namespace cmm;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

HermiteField smooth_field(int n) {
  return hermite_project(
      [](Vec2 p) {
        return Jet{std::sin(p.x) * std::cos(p.y), std::cos(p.x) * std::cos(p.y), -std::sin(p.x) * std::sin(p.y),
                   -std::cos(p.x) * std::sin(p.y)};
      },
      PeriodicGrid(n, kTwoPi));
}

void BM_HermiteEval(benchmark::State& state) {
  const HermiteField f = smooth_field(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<Vec2> pts(4096);
  for (Vec2& p : pts) p = {u(rng), u(rng)};
  for (auto _ : state) {
    double acc = 0.0;
    for (const Vec2& p : pts) acc += hermite_eval(f, p);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_HermiteEval)->Arg(128)->Arg(512);

void BM_AdvanceMap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PeriodicGrid g(n, kTwoPi);
  VelocityStack stack(3);
  for (int k = 0; k < 3; ++k) stack.push(std::make_shared<const VelocityField>(smooth_field(256), k / 32.0));
  const HermiteMap start = HermiteMap::identity(g);
  for (auto _ : state) {
    HermiteMap m = advance_map(start, stack, 3 / 32.0, 1 / 32.0, RKTableau::kutta3(), 1e-4 * kTwoPi);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_AdvanceMap)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SampleVorticity(benchmark::State& state) {
  const int n_s = static_cast<int>(state.range(0));
  MapStack stack(PeriodicGrid(128, kTwoPi));
  stack.set_active(HermiteMap(smooth_field(128), smooth_field(128)));
  const InitialVorticity w = four_modes();
  for (auto _ : state) {
    auto v = sample_vorticity(stack, w, n_s, kTwoPi / n_s, 2);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_SampleVorticity)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_VelocityFromVorticity(benchmark::State& state) {
  const int n_s = static_cast<int>(state.range(0));
  SpectralWorkspace ws(n_s, 2 * n_s, kTwoPi);
  const MapStack stack(PeriodicGrid(64, kTwoPi));
  const auto omega = sample_vorticity(stack, four_modes(), n_s, 0.0);
  for (auto _ : state) {
    VelocityField u = build_velocity(solve_stream(omega, n_s, ws), 2 * n_s, 0.0, ws);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_VelocityFromVorticity)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
