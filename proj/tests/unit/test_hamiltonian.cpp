#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ntcp/hamiltonian.hpp"
#include "ntcp/units.hpp"

namespace ntcp {
namespace {

StepHamiltonianSpec spec_for(std::vector<int> qubits, double phase = 0.0) {
  StepHamiltonianSpec s;
  s.qubits = std::move(qubits);
  s.phase = phase;
  s.detuning = -2.0;
  s.coupling = 0.7;
  s.rabi = 5.0;
  s.omega0 = 50.0;
  return s;
}

TEST(TimeDependentHamiltonian, HermitianPairAndPeriod) {
  const HilbertSpace s = make_space(1, 4);
  TimeDependentHamiltonian h(s);
  h.add_static(pauli(1, PauliAxis::kZ, s), 0.5);
  h.add_hermitian_pair(cavity_op(CavityOp::kAnnihilate, s), Complex(0.2, 0.1), 3.0);
  EXPECT_FALSE(h.is_static());
  EXPECT_EQ(h.max_frequency(), 3.0);
  for (double t : {0.0, 0.4, 1.7}) EXPECT_TRUE(h.evaluate(t).is_hermitian(1e-14));
  SparseMatrix out = h.structure();
  h.evaluate_into(0.9, out);
  EXPECT_LT(max_abs_diff(OperatorMatrix(s, out), h.evaluate(0.9)), 1e-15);
  EXPECT_LT(max_abs_diff(h.static_part(), pauli(1, PauliAxis::kZ, s) * Complex(0.5)), 1e-15);
}

TEST(FullHamiltonian, AllDecoupledLeavesCavity) {
  const DeviceParams p = example_device();
  const HilbertSpace s = make_space(2, 4);
  const std::vector<QubitKnobs> knobs(2, decoupled_knobs());
  const auto h = full_hamiltonian(p, knobs, s);
  const OperatorMatrix ref = cavity_op(CavityOp::kNumber, s) * Complex(p.cavity_omega);
  for (double t : {0.0, 1e-10, 3.3e-9}) EXPECT_LT(max_abs_diff(h.evaluate(t), ref), 1e-3);
}

TEST(FullHamiltonian, StaticSingleQubitTerms) {
  const DeviceParams p = example_device();
  const HilbertSpace s = make_space(1, 3);
  const std::vector<QubitKnobs> knobs{QubitKnobs{0.3, 0.0, 0.0, 0.0, 0.0}};
  LabFrameOptions o;
  o.cavity_coupled = false;
  const auto h = full_hamiltonian(p, knobs, s, o);
  const double ec = units::energy_to_angular(effective_charging_energy(p));
  const double ej = units::energy_to_angular(josephson_energy(p, 0.3));
  const OperatorMatrix ref = pauli(1, PauliAxis::kZ, s) * Complex(-2.0 * ec) +
                             pauli(1, PauliAxis::kX, s) * Complex(-ej) +
                             cavity_op(CavityOp::kNumber, s) * Complex(p.cavity_omega);
  EXPECT_LT(max_abs_diff(h.evaluate(0.0), ref) / ec, 1e-12);
  EXPECT_TRUE(h.is_static());
}

TEST(FullHamiltonian, DriveAmplitudeIsRabi) {
  const DeviceParams p = example_device();
  const HilbertSpace s = make_space(2, 2);
  QubitKnobs k{0.5, 0.5, p.ac_amplitude, 1e9, 0.0};
  const std::vector<QubitKnobs> knobs{k, k};
  LabFrameOptions o;
  o.cavity_coupled = false;
  const auto h = full_hamiltonian(p, knobs, s, o);
  const OperatorMatrix diff = h.evaluate(0.0) - cavity_op(CavityOp::kNumber, s) * Complex(p.cavity_omega);
  const OperatorMatrix ref = collective(Collective::kSz, {1, 2}, s) * Complex(rabi_omega(p));
  EXPECT_LT(max_abs_diff(diff, ref) / rabi_omega(p), 1e-12);
}

TEST(StepHamiltonians, H1Phases) {
  const HilbertSpace s = make_space(2, 3);
  const OperatorMatrix sz = collective(Collective::kSz, {1, 2}, s);
  EXPECT_LT(max_abs_diff(h1(spec_for({1, 2}), s), sz * Complex(2.5)), 1e-15);
  EXPECT_LT(max_abs_diff(h1(spec_for({1, 2}, std::numbers::pi), s), sz * Complex(-2.5)), 1e-15);
  StepHamiltonianSpec off = spec_for({1, 2});
  off.rabi = 0.0;
  EXPECT_EQ(h1(off, s).max_abs(), 0.0);
}

TEST(StepHamiltonians, H2AtZeroAndHermiticity) {
  const HilbertSpace s = make_space(1, 5);
  const StepHamiltonianSpec sp = spec_for({1});
  const auto h = h2(sp, s);
  const OperatorMatrix a = cavity_op(CavityOp::kAnnihilate, s);
  const OperatorMatrix p = collective(Collective::kSz, {1}, s) + collective(Collective::kSminus, {1}, s) -
                           collective(Collective::kSplus, {1}, s);
  const OperatorMatrix x = a * p;
  const OperatorMatrix ref = (x + x.adjoint()) * Complex(sp.coupling / 2.0);
  EXPECT_LT(max_abs_diff(h.evaluate(0.0), ref), 1e-15);
  const DenseMatrix m = h.evaluate(0.0).dense();
  for (int n = 1; n < 5; ++n) {
    EXPECT_NEAR(std::abs(m(s.index(0, n - 1), s.index(0, n))), sp.coupling / 2.0 * std::sqrt(n), 1e-14);
  }
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(h.evaluate(u(rng)).is_hermitian(1e-14));
}

TEST(StepHamiltonians, DressedCommutesWithSz) {
  const HilbertSpace s = make_space(2, 5);
  const auto h = h2_dressed(spec_for({1, 2}), s);
  const OperatorMatrix sz = collective(Collective::kSz, {1, 2}, s);
  for (double t : {0.0, 0.3, 2.2}) EXPECT_LT(commutator(h.evaluate(t), sz).max_abs(), 1e-14);
  ASSERT_TRUE(h.period().has_value());
  EXPECT_NEAR(*h.period(), 2.0 * std::numbers::pi / 2.0, 1e-15);
}

TEST(StepHamiltonians, DressedResidualShrinksWithRabi) {
  const HilbertSpace s = make_space(1, 4);
  double previous = 1e300;
  for (double rabi : {20.0, 80.0, 320.0}) {
    StepHamiltonianSpec sp = spec_for({1});
    sp.rabi = rabi;
    const FrameResidual r = dressed_rwa_residual(sp, s, 2.0 * std::numbers::pi / rabi, 4000);
    EXPECT_LT(r.averaged, previous);
    EXPECT_GT(r.instantaneous, r.averaged);
    previous = r.averaged;
  }
}

TEST(EffectiveHamiltonian, PairEntriesAndCommutation) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const double lambda = 1.3;
  const DenseMatrix p2 = h_eff_pair(lambda, 2, s).dense();
  EXPECT_NEAR(p2(0b110, 0b110).real(), 6.0 * lambda, 1e-14);
  EXPECT_NEAR(p2(0b000, 0b000).real(), -2.0 * lambda, 1e-14);
  EXPECT_LT(commutator(h_eff_pair(lambda, 2, s), h_eff_pair(lambda, 3, s)).max_abs(), 1e-15);
  EXPECT_LT(max_abs_diff(h_eff(lambda, 2, s), h_eff_pair(lambda, 2, s) + h_eff_pair(lambda, 3, s)), 1e-15);
}

TEST(EffectiveHamiltonian, Step3) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  EXPECT_EQ(h_step3(0.0, 0.0, s).max_abs(), 0.0);
  const double ez1 = 2e-25;
  const double ez = 3e-26;
  const double all_ones = h_step3(ez1, ez, s).dense()(7, 7).real();
  EXPECT_NEAR(all_ones / units::energy_to_angular(-ez1 - 2.0 * ez), 1.0, 1e-14);
}

}  // namespace
}  // namespace ntcp
