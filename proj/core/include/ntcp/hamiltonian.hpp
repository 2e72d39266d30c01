#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ntcp/device.hpp"
#include "ntcp/hilbert.hpp"

namespace ntcp {

/// One summand coefficient * exp(i frequency t) * op.
struct HamiltonianTerm {
  SparseMatrix op;
  Complex coefficient;
  double frequency;  // rad/s, 0 for static terms
};

/// H(t) = sum_k c_k exp(i w_k t) M_k with static sparse M_k. The union
/// sparsity pattern is precomputed so evaluation only rescales values.
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(HilbertSpace space, std::string label = {});

  const HilbertSpace& space() const { return space_; }
  const std::string& label() const { return label_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }

  void add_term(const OperatorMatrix& op, Complex coefficient, double frequency);
  void add_static(const OperatorMatrix& op, double coefficient) { add_term(op, coefficient, 0.0); }
  /// c e^{iwt} op + conj(c) e^{-iwt} op^dagger.
  void add_hermitian_pair(const OperatorMatrix& op, Complex coefficient, double frequency);

  TimeDependentHamiltonian& operator+=(const TimeDependentHamiltonian& rhs);

  OperatorMatrix evaluate(double t) const;
  SparseMatrix evaluate_sparse(double t) const;
  /// Overwrites `out`, which must have been initialized from structure().
  void evaluate_into(double t, SparseMatrix& out) const;
  const SparseMatrix& structure() const { return pattern_; }

  OperatorMatrix static_part() const;
  bool is_static() const;
  /// Largest |w_k| among time-dependent terms, 0 for static H.
  double max_frequency() const;
  /// sum_k |c_k| ||M_k||_1, an upper bound on ||H(t)|| for every t.
  double norm_bound() const;

  /// Smallest T > 0 with H(t + T) = H(t), when known.
  std::optional<double> period() const { return period_; }
  void set_period(std::optional<double> period) { period_ = period; }

 private:
  void rebuild_pattern();

  HilbertSpace space_;
  std::string label_;
  std::vector<HamiltonianTerm> terms_;
  std::optional<double> period_;
  SparseMatrix pattern_;
  std::vector<std::vector<Eigen::Index>> positions_;  // per term: slot in pattern_ values
};

/// Parameters for the two driven steps in their interaction pictures.
struct StepHamiltonianSpec {
  std::vector<int> qubits;  // participating qubits, 1-based
  double phase = 0.0;       // drive phase phi, 0 or pi
  double detuning = 0.0;    // delta = omega_c - omega, rad/s
  double coupling = 0.0;    // g, rad/s
  double rabi = 0.0;        // Omega, rad/s
  double omega0 = 0.0;      // E_J(Phi) / hbar, rad/s; drive at omega = 2 omega0
};

struct LabFrameOptions {
  /// Coupling g in rad/s; device_coupling(p) when empty.
  std::optional<double> coupling;
  /// false drops every qubit-cavity coupling term (cavity detuned away).
  bool cavity_coupled = true;
  /// Keep the cavity coupling of qubits parked at decoupled_knobs().
  bool keep_idle_coupling = false;
};

/// omega_c a^dag a + sum_j [E_z,j sigma_z,j - E_J,j sigma_x,j
///   + Omega_j cos(w_j t + phi_j) sigma_z,j + g_j (a + a^dag) sigma_z,j] / hbar.
/// Qubits at decoupled_knobs() contribute nothing unless keep_idle_coupling.
TimeDependentHamiltonian full_hamiltonian(const DeviceParams& p, std::span<const QubitKnobs> knobs,
                                          const HilbertSpace& space, const LabFrameOptions& options = {});

/// (Omega/2)[S_z cos phi + i (S+ - S-) sin phi]; phi must be 0 or pi.
OperatorMatrix h1(const StepHamiltonianSpec& spec, const HilbertSpace& space);

/// (g/2)[e^{-i delta t} a (S_z + S- - S+) + h.c.]
TimeDependentHamiltonian h2(const StepHamiltonianSpec& spec, const HilbertSpace& space);

/// (g/2)(e^{-i delta t} a + e^{i delta t} a^dag) S_z
TimeDependentHamiltonian h2_dressed(const StepHamiltonianSpec& spec, const HilbertSpace& space);

/// h1 + h2 as one time-dependent operator.
TimeDependentHamiltonian h1_plus_h2(const StepHamiltonianSpec& spec, const HilbertSpace& space);

/// h1 + h2_dressed: the dressed-frame Hamiltonian rotated back by H_1.
TimeDependentHamiltonian h1_plus_dressed(const StepHamiltonianSpec& spec, const HilbertSpace& space);

/// Exact drive and coupling terms in the interaction picture of
/// H_0 = omega_c a^dag a - omega0 S_x, without any rotating-wave step.
/// The drive frequency is omega_c - detuning.
TimeDependentHamiltonian interaction_hamiltonian(const StepHamiltonianSpec& spec, double cavity_omega,
                                                 const HilbertSpace& space);

/// -2 lambda sum_{j=2}^{n+1} (sigma_z,1 + sigma_z,j - sigma_z,1 sigma_z,j).
OperatorMatrix h_eff(double lambda, int n, const HilbertSpace& space);
/// One summand H_1j of h_eff.
OperatorMatrix h_eff_pair(double lambda, int target, const HilbertSpace& space);

/// (E_z1 sigma_z,1 + E_z S'_z) / hbar with energies in joules. Targets
/// default to qubits 2..n_qubits.
OperatorMatrix h_step3(double ez1, double ez, const HilbertSpace& space, std::vector<int> targets = {});

struct FrameResidual {
  double averaged = 0.0;       // max-abs entry of the window-averaged residual
  double instantaneous = 0.0;  // largest max-abs entry over the samples
};

/// Compares e^{iH_0 t}[Omega cos(wt+phi) S_z + g(a+a^dag) S_z]e^{-iH_0 t}
/// against h1 + h2 over [0, window].
FrameResidual lab_rwa_residual(const StepHamiltonianSpec& spec, double cavity_omega, const HilbertSpace& space,
                               double window, int samples);

/// Compares e^{iH_1 t} H_2(t) e^{-iH_1 t} against h2_dressed over [0, window].
FrameResidual dressed_rwa_residual(const StepHamiltonianSpec& spec, const HilbertSpace& space, double window,
                                   int samples);

}  // namespace ntcp
