#include "ntcp/propagator.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "ntcp/protocol.hpp"
#include "ntcp/units.hpp"

namespace ntcp {

namespace {

constexpr double kReductionTol = 1e-6;

using DiagonalPhase = std::function<double(std::uint32_t qubit_bits, int photons)>;

// exp(i phase(label)) on the diagonal, kept sparse.
OperatorMatrix diagonal_unitary(const HilbertSpace& space, const DiagonalPhase& phase) {
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix m(d, d);
  m.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Eigen::Index k = 0; k < d; ++k) {
    const BasisLabel label = space.decode(static_cast<std::size_t>(k));
    m.insert(k, k) = std::polar(1.0, phase(label.qubit_bits, label.photons));
  }
  OperatorMatrix out(space, std::move(m));
  return out.mark_unitary();
}

// Exact +-1 diagonal: -1 where flip(label) holds.
OperatorMatrix diagonal_signs(const HilbertSpace& space, const std::function<bool(std::uint32_t)>& flip) {
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix m(d, d);
  m.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Eigen::Index k = 0; k < d; ++k) {
    m.insert(k, k) = flip(space.decode(static_cast<std::size_t>(k)).qubit_bits) ? -1.0 : 1.0;
  }
  OperatorMatrix out(space, std::move(m));
  return out.mark_unitary();
}

double sz_value(const HilbertSpace& space, std::uint32_t bits, const std::vector<int>& qubits) {
  double s = 0.0;
  for (int j : qubits) s += 1.0 - 2.0 * space.qubit_value(bits, j);
  return s;
}

double z_value(const HilbertSpace& space, std::uint32_t bits, int j) { return 1.0 - 2.0 * space.qubit_value(bits, j); }

std::vector<int> default_targets(const HilbertSpace& space, std::vector<int> targets) {
  if (targets.empty()) targets = qubit_range(2, space.n_qubits());
  if (targets.empty()) throw std::invalid_argument("need at least one target qubit");
  for (int j : targets) {
    space.check_qubit(j);
    if (j == 1) throw std::invalid_argument("qubit 1 is the control and cannot be a target");
  }
  return targets;
}

std::vector<int> default_qubits(const HilbertSpace& space, std::vector<int> qubits) {
  if (qubits.empty()) return all_qubits(space);
  for (int j : qubits) space.check_qubit(j);
  return qubits;
}

// Integer c with |x - c pi| <= tol, else throws.
long reduction_cycles(double x, const char* what) {
  const double c = std::round(x / std::numbers::pi);
  if (std::abs(x - c * std::numbers::pi) > kReductionTol) {
    throw std::domain_error(std::string(what) + ": omega0 * tau = " + std::to_string(x) +
                            " is not an integer multiple of pi");
  }
  return static_cast<long>(c);
}

Complex parity_sign(long cycles, std::size_t qubits) {
  return ((cycles % 2 != 0) && (qubits % 2 != 0)) ? Complex(-1.0) : Complex(1.0);
}

void finish(ClosedFormPropagator& p) { p.matrix.mark_unitary(p.matrix.unitarity_defect() <= 1e-10); }

}  // namespace

DisplacementCoeffs displacement_coeffs(double g, double delta, double t) {
  if (delta == 0.0) throw std::invalid_argument("displacement_coeffs: delta must be nonzero");
  // Snap e^{-i delta t} to 1 on full periods so B vanishes exactly there.
  const double turns = delta * t / units::kTwoPi;
  const bool full_period = std::abs(turns - std::round(turns)) <= 1e-12 * std::max(1.0, std::abs(turns));
  const Complex rot = full_period ? Complex(1.0) : std::polar(1.0, -delta * t);
  const Complex b = full_period ? Complex(0.0) : kI * g * (rot - 1.0) / (2.0 * delta);
  const Complex a = g * (2.0 * std::conj(b) - g * t) / (4.0 * delta);
  return {a, b};
}

ClosedFormPropagator u_prime(double g, double delta, double t, const HilbertSpace& space, std::vector<int> qubits) {
  if (!space.has_cavity()) throw std::invalid_argument("u_prime needs a cavity register");
  qubits = default_qubits(space, std::move(qubits));
  const auto [a_coeff, b_coeff] = displacement_coeffs(g, delta, t);

  const auto d = static_cast<Eigen::Index>(space.dimension());
  DenseMatrix out = DenseMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double s = sz_value(space, space.decode(static_cast<std::size_t>(k)).qubit_bits, qubits);
    out(k, k) = std::exp(-kI * a_coeff * s * s);
  }
  if (b_coeff != Complex(0.0)) {
    const OperatorMatrix sz = collective(Collective::kSz, qubits, space);
    const DenseMatrix sz_a = (sz * cavity_op(CavityOp::kAnnihilate, space)).dense();
    const DenseMatrix sz_ad = (sz * cavity_op(CavityOp::kCreate, space)).dense();
    out = out * matexp(sz_a, -kI * b_coeff) * matexp(sz_ad, -kI * std::conj(b_coeff));
  }
  ClosedFormPropagator p{OperatorMatrix(space, std::move(out)), "U'(t)"};
  p.g = g;
  p.delta = delta;
  p.lambda = -g * g / (4.0 * delta);
  p.time = t;
  finish(p);
  return p;
}

ClosedFormPropagator u_step1(const StepOneInputs& in, const HilbertSpace& space, std::vector<int> qubits) {
  qubits = default_qubits(space, std::move(qubits));
  if (!(in.lambda > 0.0)) throw std::invalid_argument("u_step1: lambda must be positive");
  OperatorMatrix diag = diagonal_unitary(space, [&](std::uint32_t bits, int) {
    const double s = sz_value(space, bits, qubits);
    return -0.5 * in.rabi * in.tau * s - in.lambda * in.tau * s * s;
  });
  ClosedFormPropagator p{diag, "U(tau)"};
  const double x = in.omega0 * in.tau;
  if (in.reduce) {
    if (std::abs(x - in.m * std::numbers::pi) > kReductionTol) {
      throw std::domain_error("u_step1: omega0 * tau deviates from m * pi by " +
                              std::to_string(x - in.m * std::numbers::pi));
    }
    p.global_phase = parity_sign(in.m, qubits.size());
  } else {
    const OperatorMatrix sx = collective(Collective::kSx, qubits, space);
    p.matrix = matexp(sx, Complex(0.0, x)) * diag;
  }
  p.rabi = in.rabi;
  p.omega0 = in.omega0;
  p.lambda = in.lambda;
  p.time = in.tau;
  finish(p);
  return p;
}

ClosedFormPropagator u_step2(const StepTwoInputs& in, const HilbertSpace& space, std::vector<int> targets) {
  targets = default_targets(space, std::move(targets));
  if (!(in.lambda > 0.0)) throw std::invalid_argument("u_step2: lambda must be positive");
  OperatorMatrix diag = diagonal_unitary(space, [&](std::uint32_t bits, int) {
    const double s = sz_value(space, bits, targets);
    return 0.5 * in.rabi * in.tau * s + in.lambda * in.tau * s * s;
  });
  ClosedFormPropagator p{diag, "U~(tau')"};
  const double x = in.omega0 * in.tau;
  if (in.reduce) {
    p.global_phase = parity_sign(reduction_cycles(x, "u_step2"), targets.size());
  } else {
    p.matrix = matexp(collective(Collective::kSx, targets, space), Complex(0.0, x)) * diag;
  }
  p.rabi = in.rabi;
  p.omega0 = in.omega0;
  p.lambda = in.lambda;
  p.time = in.tau;
  finish(p);
  return p;
}

ClosedFormPropagator u_two_steps(double rabi, double lambda, double tau, const HilbertSpace& space,
                                 std::vector<int> targets) {
  targets = default_targets(space, std::move(targets));
  ClosedFormPropagator p{diagonal_unitary(space,
                                          [&](std::uint32_t bits, int) {
                                            const double z1 = z_value(space, bits, 1);
                                            const double s = sz_value(space, bits, targets);
                                            return -0.5 * rabi * tau * z1 - 2.0 * lambda * tau * z1 * s;
                                          }),
                         "U(2tau)"};
  p.global_phase = std::polar(1.0, -lambda * tau);
  p.rabi = rabi;
  p.lambda = lambda;
  p.time = 2.0 * tau;
  return p;
}

ClosedFormPropagator u_step3(double ez1, double ez, double tau, const HilbertSpace& space, std::vector<int> targets) {
  targets = default_targets(space, std::move(targets));
  const double w1 = units::energy_to_angular(ez1);
  const double w = units::energy_to_angular(ez);
  ClosedFormPropagator p{diagonal_unitary(space,
                                          [&](std::uint32_t bits, int) {
                                            return -w1 * tau * z_value(space, bits, 1) -
                                                   w * tau * sz_value(space, bits, targets);
                                          }),
                         "U-bar(tau)"};
  p.time = tau;
  return p;
}

ClosedFormPropagator u_pair(double lambda, double tau, int target, const HilbertSpace& space) {
  space.check_qubit(target);
  if (target == 1) throw std::invalid_argument("u_pair target must differ from the control");
  ClosedFormPropagator p{diagonal_unitary(space,
                                          [&](std::uint32_t bits, int) {
                                            const double z1 = z_value(space, bits, 1);
                                            const double zj = z_value(space, bits, target);
                                            return 2.0 * lambda * tau * (z1 + zj - z1 * zj);
                                          }),
                         "U_p(1," + std::to_string(target) + ")"};
  p.lambda = lambda;
  p.time = tau;
  return p;
}

ClosedFormPropagator u_total(const ProtocolParams& protocol, const HilbertSpace& space) {
  if (protocol.m <= 2 || protocol.n < 1 || !(protocol.tau > 0.0) || !(protocol.lambda > 0.0)) {
    throw std::invalid_argument("u_total: protocol parameters are not derived");
  }
  if (space.n_qubits() < protocol.n + 1) throw std::invalid_argument("u_total: space lacks target qubits");
  const std::vector<int> targets = qubit_range(2, protocol.n + 1);
  const double w1 = units::energy_to_angular(protocol.ez1_step3);
  const double w = units::energy_to_angular(protocol.ez_step3);
  const double tau = protocol.tau;
  ClosedFormPropagator p{diagonal_unitary(space,
                                          [&](std::uint32_t bits, int) {
                                            const double z1 = z_value(space, bits, 1);
                                            const double s = sz_value(space, bits, targets);
                                            return -0.5 * protocol.rabi * tau * z1 -
                                                   2.0 * protocol.lambda * tau * z1 * s - w1 * tau * z1 -
                                                   w * tau * s;
                                          }),
                         "U(3tau)"};
  p.global_phase = std::polar(1.0, -protocol.lambda * tau) * parity_sign(protocol.m, targets.size() + 1) *
                   parity_sign(protocol.m - 2, targets.size());
  p.g = protocol.g_used;
  p.delta = protocol.delta;
  p.rabi = protocol.rabi;
  p.lambda = protocol.lambda;
  p.time = 3.0 * protocol.tau;
  finish(p);
  return p;
}

OperatorMatrix cavity_free_evolution(double cavity_omega, double t, const HilbertSpace& space) {
  return diagonal_unitary(space, [&](std::uint32_t, int photons) { return -cavity_omega * t * photons; });
}

OperatorMatrix ideal_ntcp(int n, const HilbertSpace& space) {
  if (n < 1 || n + 1 > space.n_qubits()) throw std::invalid_argument("ideal_ntcp: space must hold n + 1 qubits");
  return diagonal_signs(space, [&](std::uint32_t bits) {
    if (space.qubit_value(bits, 1) == 0) return false;
    int ones = 0;
    for (int j = 2; j <= n + 1; ++j) ones += space.qubit_value(bits, j);
    return ones % 2 != 0;
  });
}

OperatorMatrix ideal_ntcnot(int n, const HilbertSpace& space) {
  if (n < 1 || n + 1 > space.n_qubits()) throw std::invalid_argument("ideal_ntcnot: space must hold n + 1 qubits");
  std::uint32_t flip = 0;
  for (int j = 2; j <= n + 1; ++j) flip |= space.qubit_mask(j);
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix m(d, d);
  m.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Eigen::Index k = 0; k < d; ++k) {
    const BasisLabel in = space.decode(static_cast<std::size_t>(k));
    const std::uint32_t out_bits = space.qubit_value(in.qubit_bits, 1) ? (in.qubit_bits ^ flip) : in.qubit_bits;
    m.insert(static_cast<Eigen::Index>(space.index(out_bits, in.photons)), k) = 1.0;
  }
  OperatorMatrix out(space, std::move(m));
  return out.with_default_storage().mark_unitary();
}

OperatorMatrix controlled_z(int target, const HilbertSpace& space) {
  space.check_qubit(target);
  return diagonal_signs(space, [&](std::uint32_t bits) {
    return space.qubit_value(bits, 1) && space.qubit_value(bits, target);
  });
}

}  // namespace ntcp
