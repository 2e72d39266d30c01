#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ntcp/integrator.hpp"
#include "ntcp/propagator.hpp"
#include "ntcp/units.hpp"

namespace ntcp {
namespace {

constexpr double kDelta = -units::kTwoPi * 10e9 / 111;
constexpr double kTau = units::kTwoPi / -kDelta;

TimeDependentHamiltonian driven_qubit() {
  const HilbertSpace s = HilbertSpace::qubits_only(1);
  TimeDependentHamiltonian h(s);
  h.add_static(pauli(1, PauliAxis::kZ, s), 0.5);
  h.add_hermitian_pair(pauli(1, PauliAxis::kX, s), 0.4, 1.3);
  return h;
}

QuantumState up(const HilbertSpace& s) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(s.dimension()));
  v(0) = 1.0;
  return QuantumState::pure(s, v);
}

TEST(Integrator, ZeroHamiltonianIsIdentity) {
  const HilbertSpace s = make_space(1, 3);
  const TimeDependentHamiltonian h(s);
  EXPECT_LT(max_abs_diff(propagator_of(h, 0.0, 2.0), OperatorMatrix::identity(s)), 1e-15);
}

TEST(Integrator, StaticMatchesMatexp) {
  const HilbertSpace s = make_space(2, 3);
  TimeDependentHamiltonian h(s);
  const OperatorMatrix m = collective(Collective::kSx, {1, 2}, s) * Complex(0.7) +
                           cavity_op(CavityOp::kNumber, s) * Complex(1.1) +
                           (cavity_op(CavityOp::kAnnihilate, s) + cavity_op(CavityOp::kCreate, s)) *
                               collective(Collective::kSz, {1, 2}, s) * Complex(0.3);
  h.add_static(m, 1.0);
  for (auto method : {IntegratorMethod::kPiecewiseExponential, IntegratorMethod::kRk4}) {
    IntegratorConfig cfg;
    cfg.method = method;
    cfg.step = method == IntegratorMethod::kRk4 ? 1e-3 : 0.0;
    EXPECT_LT(max_abs_diff(propagator_of(h, 0.0, 1.3, cfg), matexp(m, Complex(0.0, -1.3))), 1e-9);
  }
}

TEST(Integrator, CavityPhase) {
  const HilbertSpace s = make_space(1, 4);
  TimeDependentHamiltonian h(s);
  const double w = 2.5, t = 0.9;
  h.add_static(cavity_op(CavityOp::kNumber, s), w);
  Vector v = Vector::Zero(8);
  v(s.index(0, 1)) = 1.0;
  const QuantumState out = evolve_state(h, QuantumState::pure(s, v), 0.0, t);
  EXPECT_LT(std::abs(out.amplitudes()(s.index(0, 1)) - std::polar(1.0, -w * t)), 1e-12);
}

TEST(Integrator, EnsembleEvolvedMemberwise) {
  const TimeDependentHamiltonian h = driven_qubit();
  const HilbertSpace& s = h.space();
  Vector a = Vector::Zero(2), b = Vector::Zero(2);
  a(0) = 1.0;
  b(1) = 1.0;
  const QuantumState mixed = QuantumState::ensemble(s, {{0.25, a}, {0.75, b}});
  const QuantumState out = evolve_state(h, mixed, 0.0, 3.0);
  ASSERT_EQ(out.members().size(), 2u);
  EXPECT_EQ(out.members()[1].weight, 0.75);
  const QuantumState ref = evolve_state(h, QuantumState::pure(s, b), 0.0, 3.0);
  EXPECT_LT((out.members()[1].amplitudes - ref.amplitudes()).norm(), 1e-14);
  EXPECT_LT(out.norm_error(), 1e-10);
}

TEST(Integrator, NormDriftRaises) {
  const TimeDependentHamiltonian h = driven_qubit();
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::kRk4;
  cfg.step = 1.0;  // far too coarse for RK4 to stay unitary
  cfg.tolerance = 1e-12;
  EXPECT_THROW(evolve_state(h, up(h.space()), 0.0, 40.0, cfg), IntegrationError);
}

TEST(Integrator, StepLimitRaises) {
  const TimeDependentHamiltonian h = driven_qubit();
  IntegratorConfig cfg;
  cfg.step = 1e-6;
  cfg.max_steps = 1000;
  EXPECT_THROW(evolve_state(h, up(h.space()), 0.0, 1.0, cfg), IntegrationError);
}

TEST(Integrator, ResolvedStepFitsInterval) {
  const TimeDependentHamiltonian h = driven_qubit();
  IntegratorConfig cfg;
  cfg.step = 0.3;
  const double step = resolve_step(h, 0.0, 1.0, cfg);
  EXPECT_LE(step, 0.3);
  EXPECT_NEAR(1.0 / step, std::round(1.0 / step), 1e-9);
}

TEST(Integrator, PeriodicShortcutMatchesDirect) {
  const HilbertSpace s = make_space(2, 6);
  StepHamiltonianSpec spec;
  spec.qubits = {1, 2};
  spec.detuning = kDelta;
  spec.coupling = -kDelta / 3.0;
  const auto h = h2_dressed(spec, s);
  IntegratorConfig cfg;
  cfg.step = kTau / 400;
  const OperatorMatrix fast = propagator_of(h, 0.0, 3 * kTau, cfg);
  cfg.use_periodicity = false;
  const OperatorMatrix slow = propagator_of(h, 0.0, 3 * kTau, cfg);
  EXPECT_LT(max_abs_diff(fast, slow), 1e-10);
}

TEST(Integrator, DisplacedOscillatorOracle) {
  const HilbertSpace s = make_space(2, 12);
  StepHamiltonianSpec spec;
  spec.qubits = {1, 2};
  spec.detuning = kDelta;
  spec.coupling = -kDelta / 4.0;
  IntegratorConfig cfg;
  cfg.step = kTau / 4000;
  const QuantumState psi = up(s);
  const QuantumState out = evolve_state(h2_dressed(spec, s), psi, 0.0, kTau, cfg);
  const Vector ref = u_prime(spec.coupling, kDelta, kTau, s).matrix.apply(psi.amplitudes());
  EXPECT_LT((out.amplitudes() - ref).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Convergence, Orders) {
  const TimeDependentHamiltonian h = driven_qubit();
  IntegratorConfig cfg;
  cfg.step = 0.2;
  cfg.method = IntegratorMethod::kRk4;
  const ConvergenceEstimate rk4 = convergence_order(h, up(h.space()), 10.0, cfg);
  EXPECT_NEAR(rk4.order, 4.0, 0.3);
  ASSERT_GE(rk4.orders.size(), 3u);
  for (double o : rk4.orders) EXPECT_NEAR(o, 4.0, 0.3);
  cfg.method = IntegratorMethod::kPiecewiseExponential;
  const ConvergenceEstimate mid = convergence_order(h, up(h.space()), 10.0, cfg);
  EXPECT_NEAR(mid.order, 2.0, 0.3);
  for (double o : mid.orders) EXPECT_NEAR(o, 2.0, 0.3);
}

TEST(Convergence, StaticExponentialIsExact) {
  const HilbertSpace s = HilbertSpace::qubits_only(1);
  TimeDependentHamiltonian h(s);
  h.add_static(pauli(1, PauliAxis::kX, s), 0.8);
  IntegratorConfig cfg;
  cfg.step = 0.5;
  const ConvergenceEstimate e = convergence_order(h, up(s), 4.0, cfg);
  EXPECT_TRUE(e.exact);
  EXPECT_TRUE(std::isnan(e.order));
}

}  // namespace
}  // namespace ntcp
