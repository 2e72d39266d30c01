#include <gtest/gtest.h>

#include "ntcp/metrics.hpp"
#include "ntcp/propagator.hpp"
#include "ntcp/simulation.hpp"
#include "ntcp/units.hpp"

namespace ntcp {
namespace {

TEST(Simulation, FrameNames) {
  for (Frame f : {Frame::kClosedForm, Frame::kDressed, Frame::kInteraction, Frame::kLab}) {
    EXPECT_EQ(parse_frame(to_string(f)), f);
  }
  EXPECT_THROW(parse_frame("rotating"), std::invalid_argument);
}

TEST(Simulation, ClosedFormIsUTotal) {
  const DeviceParams p = example_device();
  const Derivation d = derive(p, 112, 2, 3, units::angular(600e6));
  const HilbertSpace s = protocol_space(d.params, 4);
  EXPECT_EQ(s.n_qubits(), 4);
  const OperatorMatrix u = simulate_propagator(d, p, s, {});
  EXPECT_LT(max_abs_diff(u, u_total(d.params, s).matrix), 1e-15);
  EXPECT_GT(gate_fidelity(ideal_qubit_gate(d.params, s), extract_qubit_gate(u, cavity_vacuum(4).members.front().amplitudes).gate.dense()),
            1.0 - 1e-10);
}

TEST(Simulation, DressedFrameApproachesIdeal) {
  const DeviceParams p = example_device();
  const double delta = units::kTwoPi * 10e9 / 111;
  const Derivation d = derive(p, 112, 0, 2, 20.0 * delta);
  const HilbertSpace s = protocol_space(d.params, 6);
  SimulationSettings settings;
  settings.frame = Frame::kDressed;
  const OperatorMatrix u = simulate_propagator(d, p, s, settings);
  EXPECT_LT(u.unitarity_defect(), 1e-8);
  const ExtractedGate g = extract_qubit_gate(u, cavity_vacuum(6).members.front().amplitudes);
  EXPECT_GT(gate_fidelity(ideal_qubit_gate(d.params, s), g.gate.dense()), 0.98);
  EXPECT_LT(g.leakage, 5e-2);
}

}  // namespace
}  // namespace ntcp
