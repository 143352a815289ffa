#include <benchmark/benchmark.h>

#include <numbers>

#include "bohm/chaos.hpp"
#include "bohm/dynamics.hpp"
#include "bohm/measures.hpp"

using namespace bohm;
using B = BasisState;

namespace {

WaveFunction ho3d_stat() {
  using std::numbers::pi;
  return build({{1.0, {B::spherical(0, 3, 1)}},
                {std::polar(1.0, pi / 3), {B::spherical(0, 3, 0)}},
                {std::polar(1.0, pi / 7), {B::spherical(1, 1, 0)}}});
}

void BM_EvalState(benchmark::State& state) {
  const auto s = B::spherical(2, 3, 1);
  const double p[3] = {0.7, -0.4, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(eval_state(s, p));
}
BENCHMARK(BM_EvalState);

void BM_Velocity(benchmark::State& state) {
  const auto wf = ho3d_stat();
  const Configuration q{{0.9, -1.1, 0.6}, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(velocity(wf, q));
}
BENCHMARK(BM_Velocity);

void BM_Velocity3Particles(benchmark::State& state) {
  const B a = B::polar(4, 0), b = B::polar(3, 1);
  const auto wf = build({{1.0, {a, a, b}}, {std::polar(1.0, 1.0), {a, b, a}}, {std::polar(1.0, 2.0), {b, a, a}}});
  const Configuration q{{0.9, -1.1, 0.6, 0.3, -0.2, 1.4}, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(velocity(wf, q));
}
BENCHMARK(BM_Velocity3Particles);

void BM_Trajectory(benchmark::State& state) {
  const auto wf = ho3d_stat();
  for (auto _ : state) benchmark::DoNotOptimize(integrate(wf, {{0.9, -1.1, 0.6}, 0.0}, 0.0, 10.0, IntegratorParams{}, 1.0));
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

void BM_Lyapunov(benchmark::State& state) {
  const auto wf = ho3d_stat();
  LyapunovParams p;
  p.n_steps = 10;
  p.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov(wf, {{0.9, -1.1, 0.6}, 0.0}, p, IntegratorParams{}));
}
BENCHMARK(BM_Lyapunov)->Unit(benchmark::kMillisecond);

void BM_MeyerWallach(benchmark::State& state) {
  const auto w = w_state({0.2, 0.3, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(meyer_wallach(w));
}
BENCHMARK(BM_MeyerWallach);

void BM_GeometricEntanglement(benchmark::State& state) {
  const auto w = w_state({1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (auto _ : state) benchmark::DoNotOptimize(geometric_entanglement(w));
}
BENCHMARK(BM_GeometricEntanglement)->Unit(benchmark::kMillisecond);

void BM_HenonHeiles(benchmark::State& state) {
  const auto x0 = henon_heiles_point(0.125, 0.0, -0.1, 0.0);
  LyapunovParams p;
  p.n_steps = 100;
  p.e0 = {1.0, 0.0, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(henon_heiles_lyapunov(0.125, x0, p));
}
BENCHMARK(BM_HenonHeiles)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
