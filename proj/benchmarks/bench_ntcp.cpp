#include <benchmark/benchmark.h>

#include "ntcp/hamiltonian.hpp"
#include "ntcp/integrator.hpp"
#include "ntcp/metrics.hpp"
#include "ntcp/propagator.hpp"
#include "ntcp/protocol.hpp"
#include "ntcp/units.hpp"

namespace {

using namespace ntcp;

const double kDelta = -units::kTwoPi * 10e9 / 111;
const double kTau = units::kTwoPi / -kDelta;

StepHamiltonianSpec dressed_spec(int qubits) {
  StepHamiltonianSpec s;
  s.qubits = qubit_range(1, qubits);
  s.detuning = kDelta;
  s.coupling = -kDelta / 2;
  s.rabi = -20 * kDelta;
  return s;
}

void BM_ExpAction(benchmark::State& state) {
  const HilbertSpace space = make_space(static_cast<int>(state.range(0)), 12);
  const auto h = h1_plus_h2(dressed_spec(space.n_qubits()), space);
  const SparseMatrix m = h.evaluate_sparse(0.3 * kTau);
  const auto d = static_cast<Eigen::Index>(space.dimension());
  DenseMatrix block = DenseMatrix::Identity(d, d);
  DenseMatrix w1, w2;
  for (auto _ : state) {
    exp_action(m, Complex(0.0, -kTau / 4000), block, w1, w2);
    benchmark::DoNotOptimize(block.data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_ExpAction)->Arg(2)->Arg(3)->Arg(4);

void BM_PropagatorDressedStep(benchmark::State& state) {
  const HilbertSpace space = make_space(2, static_cast<int>(state.range(0)));
  const auto h = h1_plus_h2(dressed_spec(2), space);
  IntegratorConfig cfg;
  cfg.step = kTau / 2000;
  for (auto _ : state) benchmark::DoNotOptimize(propagator_of(h, 0.0, kTau, cfg));
}
BENCHMARK(BM_PropagatorDressedStep)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ClosedFormTotal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Derivation d = derive(example_device(), 112, 2, n, units::angular(600e6));
  const HilbertSpace space = make_space(n + 1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(u_total(d.params, space));
}
BENCHMARK(BM_ClosedFormTotal)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_ExtractGate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Derivation d = derive(example_device(), 112, 2, n, units::angular(600e6));
  const HilbertSpace space = make_space(n + 1, 16);
  const OperatorMatrix u = u_total(d.params, space).matrix;
  const Vector cavity = cavity_coherent(16, Complex(1.0, 0.0)).members.front().amplitudes;
  for (auto _ : state) benchmark::DoNotOptimize(extract_qubit_gate(u, cavity));
}
BENCHMARK(BM_ExtractGate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Derive(benchmark::State& state) {
  const DeviceParams p = example_device();
  for (auto _ : state) benchmark::DoNotOptimize(derive(p, 112, 2, 5, units::angular(600e6)));
}
BENCHMARK(BM_Derive);

}  // namespace

BENCHMARK_MAIN();
