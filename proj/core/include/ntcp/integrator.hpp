#pragma once

// Time-ordered evolution under a TimeDependentHamiltonian.

#include <limits>
#include <stdexcept>
#include <vector>

#include "ntcp/hamiltonian.hpp"
#include "ntcp/hilbert.hpp"

namespace ntcp {

enum class IntegratorMethod { kPiecewiseExponential, kRk4 };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::kPiecewiseExponential;
  /// Seconds; <= 0 selects 2 pi / (200 w_max), where w_max is the larger of
  /// the fastest carrier and the norm bound of the static part.
  double step = 0.0;
  /// Allowed norm drift per column.
  double tolerance = 1e-8;
  long max_steps = 100'000'000;
  /// Use U(NT) = U(T)^N when [t0, t1] spans an integer number N >= 2 of
  /// periods of H.
  bool use_periodicity = true;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step actually used over [t0, t1]: the configured or automatic step shrunk
/// so an integer number of steps fits the interval.
double resolve_step(const TimeDependentHamiltonian& h, double t0, double t1, const IntegratorConfig& cfg);

/// Evolves every column of `block` from t0 to t1 in place.
void evolve_block(const TimeDependentHamiltonian& h, DenseMatrix& block, double t0, double t1,
                  const IntegratorConfig& cfg = {});

/// Ensembles are evolved member by member. Throws IntegrationError on norm
/// drift above cfg.tolerance or non-finite amplitudes.
QuantumState evolve_state(const TimeDependentHamiltonian& h, const QuantumState& psi0, double t0, double t1,
                          const IntegratorConfig& cfg = {});

/// U(t1, t0) column by column, parallel across columns.
OperatorMatrix propagator_of(const TimeDependentHamiltonian& h, double t0, double t1,
                             const IntegratorConfig& cfg = {});

struct ConvergenceEstimate {
  /// Last Richardson order, NaN when the method is exact.
  double order = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;
  std::vector<double> steps;
  /// ||psi_h - psi_{h/2}|| for each step in `steps` but the last.
  std::vector<double> differences;
  /// log2 ratios of consecutive differences.
  std::vector<double> orders;
};

/// Runs the fixed-step method at h, h/2, ..., h/16 from t = 0 to t and
/// estimates the global order from successive differences.
ConvergenceEstimate convergence_order(const TimeDependentHamiltonian& h, const QuantumState& psi0, double t,
                                      IntegratorConfig cfg);

}  // namespace ntcp
