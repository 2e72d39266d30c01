#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ntcp/metrics.hpp"
#include "ntcp/propagator.hpp"
#include "ntcp/protocol.hpp"
#include "ntcp/simulation.hpp"
#include "ntcp/units.hpp"

namespace ntcp {
namespace {

constexpr double kPi = std::numbers::pi;

DenseMatrix random_unitary(Eigen::Index d, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<DenseMatrix> qr(a);
  return qr.householderQ();
}

TEST(Fidelity, Basics) {
  std::mt19937 rng(1);
  const DenseMatrix u = random_unitary(8, rng);
  EXPECT_NEAR(gate_fidelity(u, u), 1.0, 1e-14);
  EXPECT_NEAR(gate_fidelity(u, u * std::polar(1.0, 0.77)), 1.0, 1e-14);
  EXPECT_THROW(gate_fidelity(u, DenseMatrix::Identity(4, 4)), std::invalid_argument);
  EXPECT_NEAR(average_gate_fidelity(1.0, 8), 1.0, 1e-15);
  EXPECT_NEAR(average_gate_fidelity(0.5, 4), 3.0 / 5.0, 1e-15);
}

TEST(Fidelity, ControlledZPhaseError) {
  const double eps = 0.1;
  DenseMatrix cz = DenseMatrix::Identity(4, 4);
  cz(3, 3) = -1.0;
  DenseMatrix actual = DenseMatrix::Identity(4, 4);
  actual(3, 3) = std::polar(1.0, kPi * (1 + eps));
  EXPECT_NEAR(gate_fidelity(cz, actual), (10.0 + 6.0 * std::cos(kPi * eps)) / 16.0, 1e-15);
  EXPECT_NEAR(1.0 - gate_fidelity(cz, actual), 3.0 * kPi * kPi * eps * eps / 16.0, 1e-3);
}

TEST(Fidelity, SymmetricAndUnitarilyInvariant) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix u = random_unitary(4, rng);
    const DenseMatrix v = random_unitary(4, rng);
    const DenseMatrix w = random_unitary(4, rng);
    const double f = gate_fidelity(u, v);
    EXPECT_NEAR(gate_fidelity(v, u), f, 1e-14);
    EXPECT_NEAR(gate_fidelity(w * u, w * v), f, 1e-13);
    EXPECT_NEAR(gate_fidelity(u * w, v * w), f, 1e-13);
  }
}

TEST(Extract, ProductRoundTrip) {
  std::mt19937 rng(4);
  const HilbertSpace s = make_space(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix g = random_unitary(4, rng);
    const DenseMatrix v = random_unitary(5, rng);
    const OperatorMatrix u(s, kron(g, v));
    Vector cavity = random_unitary(5, rng).col(0);
    const ExtractedGate out = extract_qubit_gate(u, cavity);
    EXPECT_LT(operator_distance(g, out.gate.dense()), 1e-12);
    EXPECT_LT(out.leakage, 1e-12);
    EXPECT_NEAR(std::abs(out.cavity_out.dot(v * cavity)), 1.0, 1e-12);
  }
}

TEST(Extract, DisplacedOscillatorLeakage) {
  const double delta = -units::kTwoPi * 10e9 / 111;
  const double tau = units::kTwoPi / -delta;
  const HilbertSpace s = make_space(2, 12);
  const double g = -delta / 2;
  for (const auto& st : {cavity_vacuum(12), cavity_fock(12, 3), cavity_coherent(12, Complex(0.8, 0.3))}) {
    EXPECT_LT(extract_qubit_gate(u_prime(g, delta, tau, s).matrix, st.members.front().amplitudes).leakage, 1e-9);
  }
  EXPECT_GT(extract_qubit_gate(u_prime(g, delta, tau / 2, s).matrix, cavity_vacuum(12).members.front().amplitudes)
                .leakage,
            1e-3);
}

TEST(Extract, QuantumStateOverload) {
  const HilbertSpace s = make_space(1, 3);
  std::mt19937 rng(5);
  const DenseMatrix g = random_unitary(2, rng);
  const OperatorMatrix u(s, kron(g, DenseMatrix::Identity(3, 3)));
  Vector full = Vector::Zero(6);
  full(s.index(0, 1)) = 1.0;
  const ExtractedGate out = extract_qubit_gate(u, QuantumState::pure(s, full));
  EXPECT_LT(operator_distance(g, out.gate.dense()), 1e-12);
  EXPECT_NEAR(std::abs(out.cavity_out(1)), 1.0, 1e-12);
  Vector bell = Vector::Zero(6);
  bell(s.index(0, 0)) = bell(s.index(1, 1)) = std::sqrt(0.5);
  EXPECT_THROW(extract_qubit_gate(u, QuantumState::pure(s, bell)), std::invalid_argument);
}

TEST(CavitySpecs, ParseAndBuild) {
  EXPECT_EQ(parse_cavity_spec("vacuum").kind, CavitySpec::Kind::kVacuum);
  const CavitySpec f = parse_cavity_spec("fock(3)");
  EXPECT_EQ(f.kind, CavitySpec::Kind::kFock);
  EXPECT_EQ(f.value, 3.0);
  EXPECT_EQ(parse_cavity_spec(" thermal( 0.5 ) ").kind, CavitySpec::Kind::kThermal);
  EXPECT_EQ(parse_cavity_spec("coherent(1)").label(), "coherent(1)");
  EXPECT_THROW(parse_cavity_spec("squeezed(1)"), std::invalid_argument);
  EXPECT_THROW(parse_cavity_spec("fock(1.5)"), std::invalid_argument);
  EXPECT_THROW(parse_cavity_spec("fock"), std::invalid_argument);
  const Vector vac = parse_cavity_spec("vacuum").build(6).members.front().amplitudes;
  const Vector f0 = parse_cavity_spec("fock(0)").build(6).members.front().amplitudes;
  EXPECT_EQ((vac - f0).norm(), 0.0);
}

TEST(Suite, ClosedFormSpreadAndTruncation) {
  const Derivation d = derive(example_device(), 112, 2, 3, units::angular(600e6));
  const HilbertSpace s = protocol_space(d.params, 16);
  const std::vector<CavitySpec> states{parse_cavity_spec("vacuum"), parse_cavity_spec("fock(3)"),
                                       parse_cavity_spec("coherent(1)"), parse_cavity_spec("thermal(0.5)")};
  const FidelityReport r = cavity_insensitivity_suite(
      [&](const HilbertSpace& sp) { return u_total(d.params, sp).matrix; }, ideal_qubit_gate(d.params, s), s, states);
  EXPECT_LT(r.spread, 1e-12);
  EXPECT_GT(r.process_fidelity, 1.0 - 1e-10);
  ASSERT_EQ(r.per_state.size(), 4u);
  EXPECT_EQ(r.per_state[3].label, "thermal(0.5)");
  EXPECT_TRUE(r.truncation.computed);
  EXPECT_EQ(r.truncation.half_dim, 8);
  EXPECT_LT(std::abs(r.truncation.fidelity_delta), 1e-12);
  ASSERT_EQ(r.phase_residuals.size(), 16u);
  for (double p : r.phase_residuals) EXPECT_LT(std::abs(p), 1e-9);
}

TEST(Suite, TruncationTailRejected) {
  const Derivation d = derive(example_device(), 112, 2, 2, units::angular(600e6));
  const HilbertSpace s = protocol_space(d.params, 6);
  EXPECT_THROW(cavity_insensitivity_suite([&](const HilbertSpace& sp) { return u_total(d.params, sp).matrix; },
                                          ideal_qubit_gate(d.params, s), s, {parse_cavity_spec("coherent(1)")}),
               TruncationError);
}

TEST(Suite, PhaseResidualsLocalizeError) {
  const Derivation d = derive(example_device(), 112, 2, 2, units::angular(600e6));
  const HilbertSpace s = HilbertSpace::qubits_only(3);
  DenseMatrix ideal = ideal_qubit_gate(d.params, s);
  DenseMatrix actual = ideal;
  actual(7, 7) *= std::polar(1.0, 0.2);
  const auto r = phase_residuals(ideal, actual);
  // One entry off by 0.2 moves the global phase by 0.2 / 8 to first order.
  EXPECT_NEAR(r[7] - r[0], 0.2, 1e-12);
  EXPECT_NEAR(r[0], r[3], 1e-12);
}

}  // namespace
}  // namespace ntcp
