#include <benchmark/benchmark.h>

#include "nilflow/anomaly_flow.hpp"
#include "nilflow/gauduchon.hpp"
#include "nilflow/sampling.hpp"
#include "nilflow/verification.hpp"

namespace {

using namespace nilflow;

struct Draw {
  JParams params;
  HermitianStructure structure;
};

Draw make_draw() {
  Rng rng(2024);
  const JParams p = random_params(rng);
  return {p, make_structure(p, random_metric(rng))};
}

Form random_form(Rng& rng) {
  Form f;
  for (int m = 0; m < kBasisSize; ++m)
    f[static_cast<Mask>(m)] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return f;
}

void BM_Wedge(benchmark::State& state) {
  Rng rng(1);
  const Form a = random_form(rng);
  const Form b = random_form(rng);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge);

void BM_Differential(benchmark::State& state) {
  const Draw d = make_draw();
  Rng rng(2);
  const Form a = random_form(rng);
  for (auto _ : state) benchmark::DoNotOptimize(nilflow::d(a, d.structure.sc));
}
BENCHMARK(BM_Differential);

void BM_MakeStructure(benchmark::State& state) {
  Rng rng(3);
  const JParams p = random_params(rng);
  const MetricCoeffs m = random_metric(rng);
  for (auto _ : state) benchmark::DoNotOptimize(make_structure(p, m));
}
BENCHMARK(BM_MakeStructure);

void BM_CurvatureBruteForce(benchmark::State& state) {
  const Draw d = make_draw();
  for (auto _ : state)
    benchmark::DoNotOptimize(curvature(connection_one_forms_tau(d.structure.sc, -0.5), d.structure.sc));
}
BENCHMARK(BM_CurvatureBruteForce);

void BM_CurvatureClosedForm(benchmark::State& state) {
  const Draw d = make_draw();
  for (auto _ : state)
    benchmark::DoNotOptimize(closed_form_curvature_tau(d.params, d.structure.basis.coeffs, -0.5));
}
BENCHMARK(BM_CurvatureClosedForm);

void BM_TraceClosedForm(benchmark::State& state) {
  const Draw d = make_draw();
  for (auto _ : state)
    benchmark::DoNotOptimize(closed_form_trace_tau(d.params, d.structure.basis.coeffs, -0.5));
}
BENCHMARK(BM_TraceClosedForm);

void BM_IntegrateModel(benchmark::State& state) {
  const auto steps = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_model(1.0, -4.0, 3.0, 1e-3, 1e-3 * steps, 1000));
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_IntegrateModel)->Arg(1000)->Arg(100000);

void BM_CoupledRhs(benchmark::State& state) {
  const JParams p(0, 0.0, -1.0, 0.0);
  const MetricCoeffs m = MetricCoeffs::diagonal(1, 1, 1);
  const ConservedConstants c = conserved_constants(m);
  const FlowState s{0.0, m, BundleMetricCoeffs{1.0, 1.0, 2.0}};
  for (auto _ : state) benchmark::DoNotOptimize(coupled_rhs(p, s, c, -1.0, -1.0, 1.0));
}
BENCHMARK(BM_CoupledRhs);

void BM_HsiResiduals(benchmark::State& state) {
  const JParams p(0, 0.0, -1.0, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        hsi_residuals(p, MetricCoeffs::diagonal(1, 1, 1), {1.0, 1.0, 2.0}, -1.0, -1.0, 1.0));
}
BENCHMARK(BM_HsiResiduals);

void BM_VerifyTangentDraws(benchmark::State& state) {
  VerifyOptions o;
  o.draws = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_tangent_oracles(o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerifyTangentDraws)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
