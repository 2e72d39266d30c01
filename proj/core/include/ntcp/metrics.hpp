#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntcp/hilbert.hpp"

namespace ntcp {

/// |Tr(ideal^dagger actual)|^2 / d^2. Throws on dimension mismatch.
double gate_fidelity(const DenseMatrix& ideal, const DenseMatrix& actual);
double gate_fidelity(const OperatorMatrix& ideal, const OperatorMatrix& actual);

/// (d F + 1) / (d + 1).
double average_gate_fidelity(double process_fidelity, std::size_t dimension);

/// max_ij |e^{i theta} a_ij - b_ij| with theta = arg Tr(a^dagger b).
double operator_distance(const DenseMatrix& a, const DenseMatrix& b);
double operator_distance(const OperatorMatrix& a, const OperatorMatrix& b);

struct ExtractedGate {
  OperatorMatrix gate;  // on the qubit register, arbitrary global phase
  /// 1 - sigma_1^2 / sum sigma^2 of the stacked conditional cavity outputs.
  double leakage = 0.0;
  Vector cavity_out;  // common cavity output state
};

/// Qubit map of U_full for the cavity input `cavity` (length fock_dim).
ExtractedGate extract_qubit_gate(const OperatorMatrix& u_full, const Vector& cavity);
/// Same with the cavity factor taken from a qubit-cavity product state on
/// u_full's space. Throws if the state is mixed or entangled.
ExtractedGate extract_qubit_gate(const OperatorMatrix& u_full, const QuantumState& state);

/// Restriction of a qubits-times-cavity operator to the qubit block for
/// given cavity input and output Fock vectors: <out|U|in>.
DenseMatrix cavity_block(const OperatorMatrix& u_full, const Vector& cavity_in, const Vector& cavity_out);

/// A cavity initial state that can be rebuilt at any truncation.
struct CavitySpec {
  enum class Kind { kVacuum, kFock, kCoherent, kThermal };
  Kind kind = Kind::kVacuum;
  double value = 0.0;  // photon number, |alpha| (real alpha) or nbar

  std::string label() const;
  CavityState build(int fock_dim) const;
};

/// Parses "vacuum", "fock(3)", "coherent(1)", "thermal(0.5)".
CavitySpec parse_cavity_spec(const std::string& text);

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateFidelity {
  std::string label;
  double fidelity = 0.0;
  double average_fidelity = 0.0;
  double leakage = 0.0;
  double truncated_weight = 0.0;
};

struct TruncationRecord {
  bool computed = false;
  int fock_dim = 0;
  int half_dim = 0;
  double fidelity_delta = 0.0;  // F(fock_dim) - F(half_dim) for the first state
};

struct FidelityReport {
  /// First state's process fidelity vs the ideal gate.
  double process_fidelity = 0.0;
  double average_gate_fidelity = 0.0;
  double leakage = 0.0;  // worst over states
  std::vector<StateFidelity> per_state;
  double spread = 0.0;  // max - min fidelity over states
  TruncationRecord truncation;
  /// Per computational basis state phase error (rad) of the first state's
  /// gate after removing the global phase; diagonal ideal gates only.
  std::vector<double> phase_residuals;
};

struct SuiteOptions {
  double tail_cutoff = 1e-6;
  bool truncation_check = true;
};

/// Builds the full propagator on a given space (qubits fixed, cavity
/// truncation varying).
using PropagatorBuilder = std::function<OperatorMatrix(const HilbertSpace&)>;

/// Per-state fidelity of the extracted gate against `ideal` (an operator on
/// the qubit register). Mixed cavity states score the weight-averaged
/// member fidelity. Throws TruncationError if a state's tail weight exceeds
/// the cutoff.
FidelityReport cavity_insensitivity_suite(const PropagatorBuilder& builder, const DenseMatrix& ideal,
                                          const HilbertSpace& space, const std::vector<CavitySpec>& states,
                                          const SuiteOptions& options = {});

/// Phase of each diagonal entry of `actual` relative to `ideal`, after the
/// global phase is removed, wrapped to (-pi, pi].
std::vector<double> phase_residuals(const DenseMatrix& ideal, const DenseMatrix& actual);

/// (I (x) H^{(x)n}) U (I (x) H^{(x)n}) with Hadamards on qubits 2..n+1.
OperatorMatrix hadamard_conjugate(int n, const OperatorMatrix& u);

}  // namespace ntcp
