#pragma once

// End-to-end propagators of a derived protocol in the four frames.

#include <string>

#include "ntcp/device.hpp"
#include "ntcp/integrator.hpp"
#include "ntcp/protocol.hpp"

namespace ntcp {

enum class Frame {
  kClosedForm,   // composed closed-form step operators
  kDressed,      // h1 + h2 integrated for steps (i), (ii); step (iii) exact
  kInteraction,  // drive and coupling without rotating-wave steps
  kLab,          // full lab-frame Hamiltonian of every step
};

Frame parse_frame(const std::string& text);
const char* to_string(Frame frame);

struct SimulationSettings {
  Frame frame = Frame::kClosedForm;
  IntegratorConfig integrator;
  ScheduleHamiltonianOptions lab;
};

/// Space of total_qubits() qubits and `fock_dim` cavity levels.
HilbertSpace protocol_space(const ProtocolParams& params, int fock_dim);

/// Full qubits-times-cavity propagator over [0, 3 tau] in the chosen frame.
/// All frames agree with each other up to a global phase and the
/// approximation each one keeps.
OperatorMatrix simulate_propagator(const Derivation& derivation, const DeviceParams& p, const HilbertSpace& space,
                                   const SimulationSettings& settings);

/// ideal_ntcp on the qubit register of `space`.
DenseMatrix ideal_qubit_gate(const ProtocolParams& params, const HilbertSpace& space);

}  // namespace ntcp
