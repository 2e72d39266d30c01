#pragma once

// Closed-form evolution operators of the three-step multi-target
// controlled-phase protocol and the ideal gates they are compared with.

#include <string>
#include <vector>

#include "ntcp/hilbert.hpp"

namespace ntcp {

struct ProtocolParams;

/// A closed-form unitary plus the bookkeeping needed to compare it with
/// other routes. `global_phase` is the factor by which the explicit
/// operator product differs from `matrix`: product = global_phase * matrix.
struct ClosedFormPropagator {
  OperatorMatrix matrix;
  std::string label;
  Complex global_phase{1.0, 0.0};
  double g = 0.0;
  double delta = 0.0;
  double rabi = 0.0;
  double omega0 = 0.0;
  double lambda = 0.0;
  double time = 0.0;
};

/// A(t) and B(t) of the displaced-oscillator propagator. A is complex away
/// from t = 2 pi k / |delta|; its imaginary part is |B|^2 / 2.
struct DisplacementCoeffs {
  Complex a;
  Complex b;
};

DisplacementCoeffs displacement_coeffs(double g, double delta, double t);

/// e^{-iA S_z^2} e^{-iB S_z a} e^{-iB* S_z a^dag} with S_z over `qubits`
/// (all qubits when empty).
ClosedFormPropagator u_prime(double g, double delta, double t, const HilbertSpace& space,
                             std::vector<int> qubits = {});

struct StepOneInputs {
  double omega0 = 0.0;
  double rabi = 0.0;
  double lambda = 0.0;
  double tau = 0.0;
  int m = 0;
  /// Drop exp(i omega0 tau S_x) using omega0 tau = m pi.
  bool reduce = true;
};

/// exp(i w0 tau S_x) exp(-i Omega tau S_z / 2) exp(-i lambda tau S_z^2), or
/// without the S_x factor when reduced; the dropped (-1)^m lands in
/// global_phase. Throws std::domain_error if reduction is requested and
/// |omega0 tau - m pi| > 1e-6.
ClosedFormPropagator u_step1(const StepOneInputs& in, const HilbertSpace& space, std::vector<int> qubits = {});

struct StepTwoInputs {
  double omega0 = 0.0;
  double rabi = 0.0;
  double lambda = 0.0;
  double tau = 0.0;
  bool reduce = true;
};

/// exp(i w0' tau' S'_x) exp(i Omega tau' S'_z / 2) exp(i lambda' tau' S'_z^2)
/// over the target subset (default 2..n_qubits). Reduction requires
/// omega0' tau' to be an integer multiple of pi within 1e-6.
ClosedFormPropagator u_step2(const StepTwoInputs& in, const HilbertSpace& space, std::vector<int> targets = {});

/// exp(-i Omega tau sigma_z,1 / 2) exp(-2i lambda tau sigma_z,1 S'_z). The
/// explicit product of the reduced steps equals exp(-i lambda tau) times this.
ClosedFormPropagator u_two_steps(double rabi, double lambda, double tau, const HilbertSpace& space,
                                 std::vector<int> targets = {});

/// exp(-i E_z1 tau sigma_z,1 / hbar) exp(-i E_z tau S'_z / hbar); energies in J.
ClosedFormPropagator u_step3(double ez1, double ez, double tau, const HilbertSpace& space,
                             std::vector<int> targets = {});

/// exp[2i lambda tau (sigma_z,1 + sigma_z,j - sigma_z,1 sigma_z,j)].
ClosedFormPropagator u_pair(double lambda, double tau, int target, const HilbertSpace& space);

/// u_step3 * u_two_steps for a derived protocol. Targets are 2..n+1 and
/// any further qubits are spectators left untouched.
ClosedFormPropagator u_total(const ProtocolParams& protocol, const HilbertSpace& space);

/// exp(-i omega_c t a^dag a) on the cavity register.
OperatorMatrix cavity_free_evolution(double cavity_omega, double t, const HilbertSpace& space);

/// Control qubit 1, targets 2..n+1: -1 for every target in |1> when the
/// control is |1>. Acts as identity on further qubits and the cavity.
OperatorMatrix ideal_ntcp(int n, const HilbertSpace& space);

/// Control qubit 1 flips every target 2..n+1 when in |1>.
OperatorMatrix ideal_ntcnot(int n, const HilbertSpace& space);

/// I - 2 |1_1 1_j><1_1 1_j|.
OperatorMatrix controlled_z(int target, const HilbertSpace& space);

}  // namespace ntcp
