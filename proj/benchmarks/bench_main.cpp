#include <benchmark/benchmark.h>

#include "ctsim/multiplier.hpp"
#include "ctsim/norms.hpp"
#include "ctsim/potential.hpp"
#include "ctsim/propagate.hpp"
#include "ctsim/rng.hpp"

namespace {

using namespace ctsim;

Field sample_field(const Grid& g, int components) {
  CounterRng rng(42, 0);
  return random_bandlimited_field(g, components, 0.5, rng);
}

void bm_apply_multiplier_1d(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 64.0);
  const Field f = sample_field(g, 1);
  const MultiplierSymbol sym = free_propagator_symbol(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(apply_multiplier(f, sym));
}
BENCHMARK(bm_apply_multiplier_1d)->Arg(1024)->Arg(4096);

void bm_step_scalar_1d(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 64.0);
  PotentialSpec p;
  p.shape = PotentialShape::sech2;
  p.amplitude = -1.0;
  p.width = 1.0;
  const HamiltonianSpec model = build_hamiltonian(ModelKind::scalar, 0.0, {p});
  Field f = sample_field(g, 1);
  double t = 0;
  for (auto _ : state) {
    f = step(f, model, t, 0.01);
    t += 0.01;
  }
}
BENCHMARK(bm_step_scalar_1d)->Arg(1024)->Arg(4096);

void bm_step_matrix_1d(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 64.0);
  PotentialSpec p;
  p.shape = PotentialShape::sech2;
  p.amplitude = -1.0;
  p.width = 1.0;
  p.w_amplitude = 0.3;
  p.alpha = 1.0;
  p.velocity = {1.0, 0.0, 0.0};
  const HamiltonianSpec model = build_hamiltonian(ModelKind::matrix, 0.5, {p});
  Field f = sample_field(g, 2);
  double t = 0;
  for (auto _ : state) {
    f = step(f, model, t, 0.01);
    t += 0.01;
  }
}
BENCHMARK(bm_step_matrix_1d)->Arg(512)->Arg(2048);

void bm_step_scalar_3d(benchmark::State& state) {
  const Grid g = make_grid(3, static_cast<int>(state.range(0)), 32.0);
  PotentialSpec p;
  p.shape = PotentialShape::gaussian;
  p.amplitude = -2.0;
  p.width = 1.0;
  const HamiltonianSpec model = build_hamiltonian(ModelKind::scalar, 0.0, {p});
  Field f = sample_field(g, 1);
  double t = 0;
  for (auto _ : state) {
    f = step(f, model, t, 0.01);
    t += 0.01;
  }
}
BENCHMARK(bm_step_scalar_3d)->Arg(32)->Arg(64);

void bm_split_norm(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 64.0);
  const Field f = sample_field(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(norm_l2_plus_linf(f));
}
BENCHMARK(bm_split_norm)->Arg(1024)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
