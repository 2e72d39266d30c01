#include "ntcp/simulation.hpp"

#include <numbers>
#include <stdexcept>

#include "ntcp/propagator.hpp"

namespace ntcp {

namespace {

StepHamiltonianSpec step_spec(const ProtocolParams& q, int step) {
  StepHamiltonianSpec s;
  s.coupling = q.g_used;
  s.rabi = q.rabi;
  if (step == 1) {
    s.qubits = qubit_range(1, q.n + 1);
    s.phase = 0.0;
    s.detuning = q.delta;
    s.omega0 = q.omega0_step1;
  } else {
    s.qubits = qubit_range(2, q.n + 1);
    s.phase = std::numbers::pi;
    s.detuning = q.delta_prime;
    s.omega0 = q.omega0_step2;
  }
  return s;
}

OperatorMatrix step3_exact(const ProtocolParams& q, const HilbertSpace& space) {
  return u_step3(q.ez1_step3, q.ez_step3, q.tau, space, qubit_range(2, q.n + 1)).matrix;
}

}  // namespace

Frame parse_frame(const std::string& text) {
  if (text == "closed-form") return Frame::kClosedForm;
  if (text == "dressed") return Frame::kDressed;
  if (text == "interaction") return Frame::kInteraction;
  if (text == "lab") return Frame::kLab;
  throw std::invalid_argument("unknown frame '" + text + "' (closed-form, dressed, interaction, lab)");
}

const char* to_string(Frame frame) {
  switch (frame) {
    case Frame::kClosedForm:
      return "closed-form";
    case Frame::kDressed:
      return "dressed";
    case Frame::kInteraction:
      return "interaction";
    case Frame::kLab:
      return "lab";
  }
  return "?";
}

HilbertSpace protocol_space(const ProtocolParams& params, int fock_dim) {
  return make_space(params.total_qubits(), fock_dim);
}

OperatorMatrix simulate_propagator(const Derivation& derivation, const DeviceParams& p, const HilbertSpace& space,
                                   const SimulationSettings& settings) {
  const ProtocolParams& q = derivation.params;
  if (space.n_qubits() < q.n + 1) throw std::invalid_argument("space lacks the protocol's qubits");
  switch (settings.frame) {
    case Frame::kClosedForm:
      return u_total(q, space).matrix;
    case Frame::kDressed:
    case Frame::kInteraction: {
      auto step = [&](int which) {
        const StepHamiltonianSpec spec = step_spec(q, which);
        const TimeDependentHamiltonian h = settings.frame == Frame::kDressed
                                               ? h1_plus_h2(spec, space)
                                               : interaction_hamiltonian(spec, q.cavity_omega, space);
        return propagator_of(h, 0.0, q.tau, settings.integrator);
      };
      const OperatorMatrix u1 = step(1);
      const OperatorMatrix u2 = step(2);
      return step3_exact(q, space) * (u2 * u1);
    }
    case Frame::kLab: {
      const auto hs = schedule_to_hamiltonians(derivation.schedule, q, p, space, settings.lab);
      OperatorMatrix u = OperatorMatrix::identity(space).with_storage(Storage::kDense);
      double t = 0.0;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const double dt = derivation.schedule.steps[i].duration;
        u = propagator_of(hs[i], t, t + dt, settings.integrator) * u;
        t += dt;
      }
      return u;
    }
  }
  throw std::logic_error("unhandled frame");
}

DenseMatrix ideal_qubit_gate(const ProtocolParams& params, const HilbertSpace& space) {
  return ideal_ntcp(params.n, HilbertSpace::qubits_only(space.n_qubits())).dense();
}

}  // namespace ntcp
