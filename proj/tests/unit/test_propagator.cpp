#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ntcp/device.hpp"
#include "ntcp/metrics.hpp"
#include "ntcp/propagator.hpp"
#include "ntcp/protocol.hpp"
#include "ntcp/units.hpp"

namespace ntcp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmegaC = units::kTwoPi * 10e9;
constexpr double kDelta = -kOmegaC / 111;  // step (i) detuning
constexpr double kTau = units::kTwoPi / -kDelta;

double sz_of(const HilbertSpace& s, std::uint32_t bits, const std::vector<int>& qubits) {
  double v = 0.0;
  for (int j : qubits) v += s.qubit_value(bits, j) ? -1.0 : 1.0;
  return v;
}

TEST(Displacement, Coefficients) {
  const double g = units::angular(100.7e6);
  const auto zero = displacement_coeffs(g, kDelta, 0.0);
  EXPECT_EQ(zero.b, Complex(0.0));
  EXPECT_EQ(zero.a, Complex(0.0));
  const auto full = displacement_coeffs(g, kDelta, kTau);
  EXPECT_EQ(full.b, Complex(0.0));
  EXPECT_NEAR(full.a.real() / (-g * g * kTau / (4.0 * kDelta)), 1.0, 1e-14);
  EXPECT_EQ(full.a.imag(), 0.0);
  const double lambda = -g * g / (4.0 * kDelta);
  EXPECT_GT(lambda, 0.0);
  EXPECT_NEAR(full.a.real() / (lambda * kTau), 1.0, 1e-14);
  // Off the full period A picks up |B|^2 / 2 as its imaginary part.
  const auto mid = displacement_coeffs(g, kDelta, 0.3 * kTau);
  EXPECT_NEAR(mid.a.imag(), 0.5 * std::norm(mid.b), 1e-9 * std::norm(mid.b));
}

TEST(UPrime, EndpointsFactorize) {
  const HilbertSpace s = make_space(2, 6);
  const double g = -kDelta / 3.0;
  EXPECT_LT(max_abs_diff(u_prime(g, kDelta, 0.0, s).matrix, OperatorMatrix::identity(s)), 1e-15);
  const auto u = u_prime(g, kDelta, kTau, s);
  const double a = displacement_coeffs(g, kDelta, kTau).a.real();
  const OperatorMatrix sz = collective(Collective::kSz, {1, 2}, s);
  EXPECT_LT(max_abs_diff(u.matrix, matexp(sz * sz, Complex(0.0, -a))), 1e-13);
  EXPECT_TRUE(u.matrix.unitary_flag());
}

TEST(UStep1, DiagonalPhases) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const double rabi = 7.0, lambda = 0.9, tau = 0.4;
  const int m = 4;
  const auto u = u_step1({m * kPi / tau, rabi, lambda, tau, m, true}, s);
  const DenseMatrix d = u.matrix.dense();
  for (std::uint32_t b = 0; b < 8; ++b) {
    const double mz = sz_of(s, b, {1, 2, 3});
    EXPECT_LT(std::abs(d(b, b) - std::polar(1.0, -rabi * tau * mz / 2 - lambda * tau * mz * mz)), 1e-14);
  }
  EXPECT_EQ(u.global_phase, Complex(1.0));
}

TEST(UStep1, SingleQubitSquareIsGlobalPhase) {
  const HilbertSpace s = HilbertSpace::qubits_only(1);
  const double tau = 1.0;
  const auto u = u_step1({2 * kPi, 0.0, kPi / 2, tau, 2, true}, s);
  EXPECT_LT(max_abs_diff(u.matrix, OperatorMatrix::identity(s) * Complex(0.0, -1.0)), 1e-15);
}

TEST(UStep1, DroppedFactorSignTracksQubitParity) {
  for (int q = 1; q <= 3; ++q) {
    for (int m : {3, 4}) {
      const HilbertSpace s = HilbertSpace::qubits_only(q);
      const StepOneInputs reduced{m * kPi / 0.5, 3.0, 1.1, 0.5, m, true};
      StepOneInputs full = reduced;
      full.reduce = false;
      const auto r = u_step1(reduced, s);
      const auto f = u_step1(full, s);
      EXPECT_LT(max_abs_diff(f.matrix, r.matrix * r.global_phase), 1e-12) << "q=" << q << " m=" << m;
    }
  }
}

TEST(UStep1, RejectsBrokenResonance) {
  const HilbertSpace s = HilbertSpace::qubits_only(2);
  EXPECT_THROW(u_step1({(4 * kPi + 1e-3) / 0.5, 1.0, 1.0, 0.5, 4, true}, s), std::domain_error);
}

TEST(UStep2, TargetsOnlyWithPositiveExponents) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const double tau = 0.8;
  const auto u = u_step2({6 * kPi / tau, 0.0, kPi / 8 / tau, tau, true}, s);
  const DenseMatrix d = u.matrix.dense();
  for (std::uint32_t b = 0; b < 8; ++b) {
    const double mz = sz_of(s, b, {2, 3});
    EXPECT_LT(std::abs(d(b, b) - std::polar(1.0, kPi / 8 * mz * mz)), 1e-14);
  }
  const OperatorMatrix z1 = pauli(1, PauliAxis::kZ, s);
  EXPECT_LT(commutator(u.matrix, z1).max_abs(), 1e-15);
  // Identity on the control: the two control halves carry the same block.
  EXPECT_LT((d.topLeftCorner(4, 4) - d.bottomRightCorner(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(UTwoSteps, ControlOffEntries) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const double rabi = 4.0, lambda = 0.35, tau = 1.2;
  const auto u = u_two_steps(rabi, lambda, tau, s);
  const DenseMatrix d = u.matrix.dense();
  for (std::uint32_t b = 0; b < 4; ++b) {
    const double mzp = sz_of(s, b, {2, 3});
    EXPECT_LT(std::abs(d(b, b) - std::polar(1.0, -rabi * tau / 2) * std::polar(1.0, -2 * lambda * tau * mzp)), 1e-14);
  }
  EXPECT_LT(std::abs(u.global_phase - std::polar(1.0, -lambda * tau)), 1e-15);
}

TEST(UTwoSteps, EqualsExplicitProduct) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const double rabi = 6.1, lambda = 0.71, tau = 0.9;
  const auto two = u_two_steps(rabi, lambda, tau, s);
  for (int m : {5, 6}) {
    const auto u1 = u_step1({m * kPi / tau, rabi, lambda, tau, m, false}, s);
    const auto u2 = u_step2({(m - 2) * kPi / tau, rabi, lambda, tau, false}, s);
    // The dropped S_x factors contribute (-1)^(m q) and (-1)^((m-2)(q-1)).
    const Complex parity = (m % 2 != 0) ? Complex(-1.0) : Complex(1.0);
    EXPECT_LT(max_abs_diff(u2.matrix * u1.matrix, two.matrix * (two.global_phase * parity)), 1e-10) << m;
    const auto r1 = u_step1({m * kPi / tau, rabi, lambda, tau, m, true}, s);
    const auto r2 = u_step2({(m - 2) * kPi / tau, rabi, lambda, tau, true}, s);
    EXPECT_LT(max_abs_diff(r2.matrix * r1.matrix, two.matrix * two.global_phase), 1e-12);
  }
}

TEST(UStep3, ChargeOffsets) {
  const DeviceParams p = example_device();
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  EXPECT_LT(max_abs_diff(u_step3(0.0, 0.0, 1.0, s).matrix, OperatorMatrix::identity(s)), 1e-15);
  const double ec = effective_charging_energy(p);
  const double lambda = units::angular(28e6), rabi = units::angular(600e6);
  const int n = 2;
  const double ng1 = 0.5 - units::kHbar * (4 * n * lambda + rabi) / (8 * ec);
  const double ng = 0.5 - units::kHbar * lambda / (2 * ec);
  EXPECT_NEAR(ez_energy(p, ng1) / (-units::kHbar * (4 * n * lambda + rabi) / 2), 1.0, 1e-9);
  EXPECT_NEAR(ez_energy(p, ng) / (-2 * units::kHbar * lambda), 1.0, 1e-9);
}

TEST(UPair, Eigenphases) {
  const HilbertSpace s = HilbertSpace::qubits_only(2);
  const double lambda = 0.3, tau = 1.1;
  const DenseMatrix d = u_pair(lambda, tau, 2, s).matrix.dense();
  for (std::uint32_t b : {0u, 1u, 2u}) EXPECT_LT(std::abs(d(b, b) - std::polar(1.0, 2 * lambda * tau)), 1e-15);
  EXPECT_LT(std::abs(d(3, 3) - std::polar(1.0, -6 * lambda * tau)), 1e-15);
  // 8 lambda tau = 5 pi turns the pair into a controlled-Z.
  const auto cz = u_pair(5 * kPi / 8, 1.0, 2, s);
  EXPECT_LT(operator_distance(cz.matrix, controlled_z(2, s)), 1e-14);
}

TEST(UTotal, MatchesPairProductAndIdeal) {
  const DeviceParams p = example_device();
  for (int n = 2; n <= 5; ++n) {
    const Derivation d = derive(p, 112, 2, n, units::angular(600e6));
    const HilbertSpace s = HilbertSpace::qubits_only(n + 1);
    const auto u = u_total(d.params, s);
    OperatorMatrix pairs = OperatorMatrix::identity(s);
    for (int j = 2; j <= n + 1; ++j) pairs = u_pair(d.params.lambda, d.params.tau, j, s).matrix * pairs;
    EXPECT_LT(operator_distance(u.matrix, pairs), 1e-10);
    EXPECT_GT(gate_fidelity(ideal_ntcp(n, s), u.matrix), 1.0 - 1e-10);
  }
}

TEST(UTotal, TwoTargetsSignPattern) {
  const Derivation d = derive(example_device(), 112, 0, 2, units::angular(600e6));
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const DenseMatrix u = u_total(d.params, s).matrix.dense();
  const Complex ref = u(0, 0);
  for (std::uint32_t b = 0; b < 8; ++b) {
    const double sign = (b == 0b110 || b == 0b101) ? -1.0 : 1.0;
    EXPECT_LT(std::abs(u(b, b) - sign * ref), 1e-12) << b;
  }
}

TEST(UTotal, RequiresQubits) {
  const Derivation d = derive(example_device(), 112, 2, 3, units::angular(600e6));
  EXPECT_ANY_THROW(u_total(d.params, HilbertSpace::qubits_only(3)));
}

TEST(IdealGates, TruthTables) {
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  const DenseMatrix ntcp = ideal_ntcp(2, s).dense();
  EXPECT_EQ(ntcp(0b111, 0b111), Complex(1.0));
  EXPECT_EQ(ntcp(0b110, 0b110), Complex(-1.0));
  for (std::uint32_t b = 0; b < 4; ++b) EXPECT_EQ(ntcp(b, b), Complex(1.0));
  OperatorMatrix product = OperatorMatrix::identity(s);
  for (int j = 2; j <= 3; ++j) product = controlled_z(j, s) * product;
  EXPECT_EQ(max_abs_diff(product, ideal_ntcp(2, s)), 0.0);

  const DenseMatrix cnot = ideal_ntcnot(2, s).dense();
  EXPECT_EQ(cnot(0b111, 0b100), Complex(1.0));
  for (std::uint32_t b = 0; b < 4; ++b) EXPECT_EQ(cnot(b, b), Complex(1.0));
  for (int n = 1; n <= 5; ++n) {
    const HilbertSpace q = HilbertSpace::qubits_only(n + 1);
    EXPECT_LT(max_abs_diff(hadamard_conjugate(n, ideal_ntcp(n, q)), ideal_ntcnot(n, q)), 1e-12);
  }
}

TEST(CavityFree, Phases) {
  const HilbertSpace s = make_space(1, 4);
  const DenseMatrix u = cavity_free_evolution(2.0, 0.3, s).dense();
  for (int n = 0; n < 4; ++n) EXPECT_LT(std::abs(u(s.index(1, n), s.index(1, n)) - std::polar(1.0, -0.6 * n)), 1e-15);
}

}  // namespace
}  // namespace ntcp
