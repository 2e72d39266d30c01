#include "ntcp/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ntcp/units.hpp"

namespace ntcp {

namespace {

constexpr double kPhaseTol = 1e-12;

double column_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

std::optional<double> combine_period(const TimeDependentHamiltonian& a, const TimeDependentHamiltonian& b) {
  if (a.is_static()) return b.period();
  if (b.is_static()) return a.period();
  if (a.period() && b.period() && std::abs(*a.period() - *b.period()) <= 1e-12 * *a.period()) return a.period();
  return std::nullopt;
}

}  // namespace

TimeDependentHamiltonian::TimeDependentHamiltonian(HilbertSpace space, std::string label)
    : space_(std::move(space)), label_(std::move(label)) {
  rebuild_pattern();
}

void TimeDependentHamiltonian::add_term(const OperatorMatrix& op, Complex coefficient, double frequency) {
  if (!(op.space() == space_)) throw std::invalid_argument("Hamiltonian term lives on a different space");
  SparseMatrix m = op.sparse();
  m.prune(Complex{0.0}, 0.0);
  m.makeCompressed();
  if (m.nonZeros() == 0 || coefficient == Complex{0.0}) return;
  terms_.push_back({std::move(m), coefficient, frequency});
  rebuild_pattern();
}

void TimeDependentHamiltonian::add_hermitian_pair(const OperatorMatrix& op, Complex coefficient, double frequency) {
  add_term(op, coefficient, frequency);
  add_term(op.adjoint(), std::conj(coefficient), -frequency);
}

TimeDependentHamiltonian& TimeDependentHamiltonian::operator+=(const TimeDependentHamiltonian& rhs) {
  if (!(rhs.space_ == space_)) throw std::invalid_argument("adding Hamiltonians on different spaces");
  const auto period = combine_period(*this, rhs);
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  period_ = period;
  rebuild_pattern();
  return *this;
}

void TimeDependentHamiltonian::rebuild_pattern() {
  const auto d = static_cast<Eigen::Index>(space_.dimension());
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (const auto& term : terms_) {
    for (Eigen::Index k = 0; k < term.op.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(term.op, k); it; ++it) triplets.emplace_back(it.row(), it.col(), 1.0);
    }
  }
  pattern_ = SparseMatrix(d, d);
  pattern_.setFromTriplets(triplets.begin(), triplets.end());
  pattern_.makeCompressed();

  positions_.clear();
  const auto* outer = pattern_.outerIndexPtr();
  const auto* inner = pattern_.innerIndexPtr();
  for (const auto& term : terms_) {
    std::vector<Eigen::Index> pos;
    pos.reserve(static_cast<std::size_t>(term.op.nonZeros()));
    for (Eigen::Index k = 0; k < term.op.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(term.op, k); it; ++it) {
        const auto* first = inner + outer[k];
        const auto* last = inner + outer[k + 1];
        const auto* hit = std::lower_bound(first, last, static_cast<int>(it.row()));
        pos.push_back(static_cast<Eigen::Index>(hit - inner));
      }
    }
    positions_.push_back(std::move(pos));
  }
}

void TimeDependentHamiltonian::evaluate_into(double t, SparseMatrix& out) const {
  if (out.nonZeros() != pattern_.nonZeros() || out.rows() != pattern_.rows()) {
    throw std::invalid_argument("evaluate_into: output not initialized from structure()");
  }
  Complex* values = out.valuePtr();
  std::fill(values, values + out.nonZeros(), Complex{0.0});
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& term = terms_[k];
    const Complex c = term.frequency == 0.0 ? term.coefficient
                                            : term.coefficient * std::polar(1.0, term.frequency * t);
    const Complex* src = term.op.valuePtr();
    const auto& pos = positions_[k];
    for (std::size_t i = 0; i < pos.size(); ++i) values[pos[i]] += c * src[i];
  }
}

SparseMatrix TimeDependentHamiltonian::evaluate_sparse(double t) const {
  SparseMatrix out = pattern_;
  evaluate_into(t, out);
  return out;
}

OperatorMatrix TimeDependentHamiltonian::evaluate(double t) const {
  return OperatorMatrix(space_, evaluate_sparse(t)).with_default_storage();
}

OperatorMatrix TimeDependentHamiltonian::static_part() const {
  const auto d = static_cast<Eigen::Index>(space_.dimension());
  SparseMatrix sum(d, d);
  for (const auto& term : terms_) {
    if (term.frequency == 0.0) sum += term.coefficient * term.op;
  }
  return OperatorMatrix(space_, std::move(sum)).with_default_storage();
}

bool TimeDependentHamiltonian::is_static() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.frequency == 0.0; });
}

double TimeDependentHamiltonian::max_frequency() const {
  double w = 0.0;
  for (const auto& term : terms_) w = std::max(w, std::abs(term.frequency));
  return w;
}

double TimeDependentHamiltonian::norm_bound() const {
  double s = 0.0;
  for (const auto& term : terms_) s += std::abs(term.coefficient) * column_norm(term.op);
  return s;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

void require_supported_phase(double phase) {
  if (std::abs(phase) > kPhaseTol && std::abs(phase - std::numbers::pi) > kPhaseTol) {
    throw std::invalid_argument("drive phase must be 0 or pi");
  }
}

void require_detuning(const StepHamiltonianSpec& spec) {
  if (spec.detuning == 0.0) throw std::invalid_argument("detuning must be nonzero");
}

bool is_pi(double phase) { return std::abs(phase - std::numbers::pi) <= kPhaseTol; }

// sigma_z + sigma_minus - sigma_plus summed over the subset: 2|-><+| per qubit.
OperatorMatrix minus_plus_projector_sum(const std::vector<int>& qubits, const HilbertSpace& space) {
  return collective(Collective::kSz, qubits, space) + collective(Collective::kSminus, qubits, space) -
         collective(Collective::kSplus, qubits, space);
}

}  // namespace

TimeDependentHamiltonian full_hamiltonian(const DeviceParams& p, std::span<const QubitKnobs> knobs,
                                          const HilbertSpace& space, const LabFrameOptions& options) {
  if (knobs.size() != static_cast<std::size_t>(space.n_qubits())) {
    throw std::invalid_argument("full_hamiltonian: " + std::to_string(knobs.size()) + " knob sets for " +
                                std::to_string(space.n_qubits()) + " qubits");
  }
  TimeDependentHamiltonian h(space, "lab");
  if (space.has_cavity()) h.add_static(cavity_op(CavityOp::kNumber, space), p.cavity_omega);

  const double g = options.coupling.value_or(device_coupling(p));
  const OperatorMatrix quadrature =
      space.has_cavity() ? cavity_op(CavityOp::kAnnihilate, space) + cavity_op(CavityOp::kCreate, space)
                         : OperatorMatrix::zero(space);
  std::vector<double> drive_frequencies;
  for (int j = 1; j <= space.n_qubits(); ++j) {
    const QubitKnobs& k = knobs[static_cast<std::size_t>(j - 1)];
    validate(k);
    const bool idle = is_decoupled(k);
    if (idle && !options.keep_idle_coupling) continue;
    const OperatorMatrix sz = pauli(j, PauliAxis::kZ, space);
    const double ez = units::energy_to_angular(ez_energy(p, k.ng_dc));
    const double ej = units::energy_to_angular(josephson_energy(p, k.flux_ratio));
    if (ez != 0.0) h.add_static(sz, ez);
    if (ej != 0.0) h.add_static(pauli(j, PauliAxis::kX, space), -ej);
    const double rabi = rabi_omega(p, k.ac_amplitude);
    if (rabi != 0.0) {
      h.add_hermitian_pair(sz, 0.5 * rabi * std::polar(1.0, k.ac_phase), k.ac_frequency);
      drive_frequencies.push_back(k.ac_frequency);
    }
    if (options.cavity_coupled && space.has_cavity() && g != 0.0) h.add_static(quadrature * sz, g);
  }
  std::optional<double> period;
  if (!drive_frequencies.empty()) {
    const double w = drive_frequencies.front();
    const bool common = std::all_of(drive_frequencies.begin(), drive_frequencies.end(),
                                    [w](double x) { return std::abs(x - w) <= 1e-12 * std::abs(w); });
    if (common && w != 0.0) period = units::kTwoPi / std::abs(w);
  }
  h.set_period(period);
  return h;
}

OperatorMatrix h1(const StepHamiltonianSpec& spec, const HilbertSpace& space) {
  require_supported_phase(spec.phase);
  const double sign = is_pi(spec.phase) ? -1.0 : 1.0;
  // sin(phi) vanishes at both supported phases, so only the S_z part survives.
  return collective(Collective::kSz, spec.qubits, space) * Complex(0.5 * spec.rabi * sign);
}

TimeDependentHamiltonian h2(const StepHamiltonianSpec& spec, const HilbertSpace& space) {
  require_detuning(spec);
  if (!space.has_cavity()) throw std::invalid_argument("h2 needs a cavity register");
  TimeDependentHamiltonian h(space, "H2");
  const OperatorMatrix c = cavity_op(CavityOp::kAnnihilate, space) * minus_plus_projector_sum(spec.qubits, space);
  h.add_hermitian_pair(c, 0.5 * spec.coupling, -spec.detuning);
  h.set_period(units::kTwoPi / std::abs(spec.detuning));
  return h;
}

TimeDependentHamiltonian h2_dressed(const StepHamiltonianSpec& spec, const HilbertSpace& space) {
  require_detuning(spec);
  if (!space.has_cavity()) throw std::invalid_argument("h2_dressed needs a cavity register");
  TimeDependentHamiltonian h(space, "H2'");
  const OperatorMatrix c = cavity_op(CavityOp::kAnnihilate, space) * collective(Collective::kSz, spec.qubits, space);
  h.add_hermitian_pair(c, 0.5 * spec.coupling, -spec.detuning);
  h.set_period(units::kTwoPi / std::abs(spec.detuning));
  return h;
}

TimeDependentHamiltonian h1_plus_h2(const StepHamiltonianSpec& spec, const HilbertSpace& space) {
  TimeDependentHamiltonian h = h2(spec, space);
  TimeDependentHamiltonian drive(space);
  drive.add_static(h1(spec, space), 1.0);
  h += drive;
  return h;
}

TimeDependentHamiltonian h1_plus_dressed(const StepHamiltonianSpec& spec, const HilbertSpace& space) {
  TimeDependentHamiltonian h = h2_dressed(spec, space);
  TimeDependentHamiltonian drive(space);
  drive.add_static(h1(spec, space), 1.0);
  h += drive;
  return h;
}

TimeDependentHamiltonian interaction_hamiltonian(const StepHamiltonianSpec& spec, double cavity_omega,
                                                 const HilbertSpace& space) {
  if (!space.has_cavity()) throw std::invalid_argument("interaction_hamiltonian needs a cavity register");
  const double w = cavity_omega - spec.detuning;  // drive frequency
  const double w0 = spec.omega0;
  // sigma_z in the H_0 picture: e^{-2i w0 t} |+><-| + e^{2i w0 t} |-><+|.
  const OperatorMatrix plus_minus =
      (collective(Collective::kSz, spec.qubits, space) - collective(Collective::kSminus, spec.qubits, space) +
       collective(Collective::kSplus, spec.qubits, space)) *
      Complex(0.5);
  const OperatorMatrix minus_plus = plus_minus.adjoint();
  const OperatorMatrix a = cavity_op(CavityOp::kAnnihilate, space);
  const Complex drive = 0.5 * spec.rabi * std::polar(1.0, spec.phase);

  TimeDependentHamiltonian h(space, "interaction");
  h.add_hermitian_pair(plus_minus, drive, w - 2.0 * w0);
  h.add_hermitian_pair(minus_plus, drive, w + 2.0 * w0);
  h.add_hermitian_pair(a * plus_minus, spec.coupling, -(cavity_omega + 2.0 * w0));
  h.add_hermitian_pair(a * minus_plus, spec.coupling, -(cavity_omega - 2.0 * w0));
  if (spec.detuning != 0.0) {
    // All carriers are integer multiples of |delta| on the protocol grid;
    // callers that leave the grid should clear the period.
    h.set_period(units::kTwoPi / std::abs(spec.detuning));
  }
  return h;
}

OperatorMatrix h_eff_pair(double lambda, int target, const HilbertSpace& space) {
  if (target < 2) throw std::out_of_range("h_eff target must be >= 2");
  const OperatorMatrix z1 = pauli(1, PauliAxis::kZ, space);
  const OperatorMatrix zj = pauli(target, PauliAxis::kZ, space);
  return (z1 + zj - z1 * zj) * Complex(-2.0 * lambda);
}

OperatorMatrix h_eff(double lambda, int n, const HilbertSpace& space) {
  if (n < 1 || n + 1 > space.n_qubits()) throw std::invalid_argument("h_eff: space must hold n + 1 qubits");
  OperatorMatrix sum = OperatorMatrix::zero(space);
  for (int j = 2; j <= n + 1; ++j) sum += h_eff_pair(lambda, j, space);
  return sum;
}

OperatorMatrix h_step3(double ez1, double ez, const HilbertSpace& space, std::vector<int> targets) {
  if (targets.empty()) targets = qubit_range(2, space.n_qubits());
  OperatorMatrix h = pauli(1, PauliAxis::kZ, space) * Complex(units::energy_to_angular(ez1));
  if (!targets.empty()) h += collective(Collective::kSz, targets, space) * Complex(units::energy_to_angular(ez));
  return h;
}

// ---------------------------------------------------------------------------
// Frame residuals

namespace {

struct FrameRotation {
  DenseMatrix vectors;
  Eigen::VectorXd energies;

  explicit FrameRotation(const DenseMatrix& h) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(0.5 * (h + h.adjoint()));
    vectors = eig.eigenvectors();
    energies = eig.eigenvalues();
  }

  // e^{iHt} X e^{-iHt}
  DenseMatrix conjugate(const DenseMatrix& x, double t) const {
    const Vector phases = (Complex(0.0, t) * energies.cast<Complex>()).array().exp();
    const DenseMatrix u = vectors * phases.asDiagonal() * vectors.adjoint();
    return u * x * u.adjoint();
  }
};

template <class Residual>
FrameResidual average_residual(Residual&& residual, double window, int samples) {
  if (window <= 0.0) throw std::invalid_argument("residual window must be positive");
  if (samples < 2) samples = 2;
  if (samples % 2) ++samples;
  const double dt = window / samples;
  FrameResidual out;
  DenseMatrix acc;
  for (int i = 0; i <= samples; ++i) {
    const DenseMatrix r = residual(i * dt);
    out.instantaneous = std::max(out.instantaneous, r.cwiseAbs().maxCoeff());
    const double w = (i == 0 || i == samples) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    if (i == 0) {
      acc = w * r;
    } else {
      acc += w * r;
    }
  }
  acc *= dt / (3.0 * window);
  out.averaged = acc.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace

FrameResidual lab_rwa_residual(const StepHamiltonianSpec& spec, double cavity_omega, const HilbertSpace& space,
                               double window, int samples) {
  const DenseMatrix sz = collective(Collective::kSz, spec.qubits, space).dense();
  const DenseMatrix sx = collective(Collective::kSx, spec.qubits, space).dense();
  const DenseMatrix n = cavity_op(CavityOp::kNumber, space).dense();
  const DenseMatrix quad =
      (cavity_op(CavityOp::kAnnihilate, space) + cavity_op(CavityOp::kCreate, space)).dense() * sz;
  const FrameRotation frame(cavity_omega * n - spec.omega0 * sx);
  const double w = cavity_omega - spec.detuning;
  const TimeDependentHamiltonian rwa = h1_plus_h2(spec, space);
  return average_residual(
      [&](double t) {
        const DenseMatrix lab = spec.rabi * std::cos(w * t + spec.phase) * sz + spec.coupling * quad;
        return DenseMatrix(frame.conjugate(lab, t) - DenseMatrix(rwa.evaluate_sparse(t)));
      },
      window, samples);
}

FrameResidual dressed_rwa_residual(const StepHamiltonianSpec& spec, const HilbertSpace& space, double window,
                                   int samples) {
  const FrameRotation frame(h1(spec, space).dense());
  const TimeDependentHamiltonian coupling = h2(spec, space);
  const TimeDependentHamiltonian dressed = h2_dressed(spec, space);
  return average_residual(
      [&](double t) {
        return DenseMatrix(frame.conjugate(DenseMatrix(coupling.evaluate_sparse(t)), t) -
                           DenseMatrix(dressed.evaluate_sparse(t)));
      },
      window, samples);
}

}  // namespace ntcp
