#include <benchmark/benchmark.h>

#include "qbell/bell.hpp"
#include "qbell/cv_map.hpp"
#include "qbell/optimizer.hpp"
#include "qbell/rng.hpp"
#include "qbell/sud_algebra.hpp"

using namespace qbell;

namespace {

ParameterVector sample_params(int d, ParameterVector::Mode mode, std::uint64_t salt) {
  const int n = ParameterVector::length(d, mode);
  RealVector values(n);
  for (int i = 0; i < n; ++i) values[i] = counter_uniform(42, salt, i, -2.0, 2.0);
  return ParameterVector::from_values(d, mode, values);
}

void BM_UnitaryFromParams(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GeneratorSet gens = build_generators(d);
  const auto p = sample_params(d, ParameterVector::Mode::Full, 1);
  for (auto _ : state) benchmark::DoNotOptimize(unitary_from_params(p, gens));
}
BENCHMARK(BM_UnitaryFromParams)->Arg(2)->Arg(3)->Arg(5);

void BM_AdjointDirect(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GeneratorSet gens = build_generators(d);
  const Matrix u = unitary_from_params(sample_params(d, ParameterVector::Mode::Full, 2), gens);
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_matrix_direct(u, gens));
}
BENCHMARK(BM_AdjointDirect)->Arg(3)->Arg(5);

void BM_AdjointExp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GeneratorSet gens = build_generators(d);
  const StructureConstants f = structure_constants(gens);
  const auto p = sample_params(d, ParameterVector::Mode::Full, 3);
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_matrix_exp(p, f));
}
BENCHMARK(BM_AdjointExp)->Arg(3)->Arg(5);

void BM_BellValue(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GeneratorSet gens = build_generators(d);
  const BellSpec spec = BellSpec::standard(d);
  const BipartiteState psi = BipartiteState::maximally_entangled(d);
  const MeasurementConfig config = {
      sample_params(d, ParameterVector::Mode::Reduced, 10),
      sample_params(d, ParameterVector::Mode::Reduced, 11),
      sample_params(d, ParameterVector::Mode::Reduced, 12),
      sample_params(d, ParameterVector::Mode::Reduced, 13)};
  for (auto _ : state) benchmark::DoNotOptimize(bell_value(psi, config, spec, gens));
}
BENCHMARK(BM_BellValue)->Arg(2)->Arg(3)->Arg(5);

void BM_BellGradient(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GeneratorSet gens = build_generators(d);
  const BipartiteState psi = BipartiteState::maximally_entangled(d);
  const ObjectiveAdapter adapter(psi, BellSpec::standard(d), gens,
                                 ParameterVector::Mode::Reduced);
  RealVector x(adapter.dim());
  for (int i = 0; i < x.size(); ++i) x[i] = counter_uniform(7, 0, i, -2.0, 2.0);
  const Objective f = adapter.fn();
  for (auto _ : state) benchmark::DoNotOptimize(fd_gradient(f, x));
}
BENCHMARK(BM_BellGradient)->Arg(3)->Arg(5);

void BM_CpMapTwoModePure(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CVState tmsv = tmsv_state(1.0, 60).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(cp_map_two_mode_pure(tmsv.pure_two, d));
}
BENCHMARK(BM_CpMapTwoModePure)->Arg(2)->Arg(5);

} // namespace

BENCHMARK_MAIN();
