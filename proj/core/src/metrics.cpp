#include "ntcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ntcp/parallel.hpp"

namespace ntcp {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    auto shape = [](const DenseMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); };
    throw std::invalid_argument("gates must be square and equal in shape: " + shape(a) + " vs " + shape(b));
  }
}

// Rows: (input column j, qubit output) ; columns: cavity output.
DenseMatrix stacked_outputs(const OperatorMatrix& u_full, const Vector& cavity) {
  const HilbertSpace& space = u_full.space();
  const auto f = static_cast<Eigen::Index>(space.fock_dim());
  const auto q = static_cast<Eigen::Index>(space.qubit_dim());
  if (cavity.size() != f) throw std::invalid_argument("cavity vector length must equal fock_dim");
  DenseMatrix inputs = DenseMatrix::Zero(q * f, q);
  for (Eigen::Index j = 0; j < q; ++j) inputs.col(j).segment(j * f, f) = cavity;
  const DenseMatrix out = u_full.apply(inputs);
  DenseMatrix stacked(q * q, f);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index b = 0; b < q; ++b) stacked.row(j * q + b) = out.col(j).segment(b * f, f).transpose();
  }
  return stacked;
}

double wrap(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x <= -std::numbers::pi ? x + 2.0 * std::numbers::pi : x;
}

}  // namespace

double gate_fidelity(const DenseMatrix& ideal, const DenseMatrix& actual) {
  require_same_shape(ideal, actual);
  const double d = static_cast<double>(ideal.rows());
  return std::norm((ideal.adjoint() * actual).trace()) / (d * d);
}

double gate_fidelity(const OperatorMatrix& ideal, const OperatorMatrix& actual) {
  return gate_fidelity(ideal.dense(), actual.dense());
}

double average_gate_fidelity(double process_fidelity, std::size_t dimension) {
  const double d = static_cast<double>(dimension);
  return (d * process_fidelity + 1.0) / (d + 1.0);
}

double operator_distance(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  const Complex overlap = (a.adjoint() * b).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a * phase - b).cwiseAbs().maxCoeff();
}

double operator_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
  return operator_distance(a.dense(), b.dense());
}

ExtractedGate extract_qubit_gate(const OperatorMatrix& u_full, const Vector& cavity) {
  const HilbertSpace& space = u_full.space();
  const auto q = static_cast<Eigen::Index>(space.qubit_dim());
  const DenseMatrix stacked = stacked_outputs(u_full, cavity);
  // Right singular vectors of the stack from its f x f Gram matrix.
  const DenseMatrix gram = stacked.adjoint() * stacked;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(gram);
  const Eigen::VectorXd sigma2 = eig.eigenvalues().cwiseMax(0.0);
  const double total = sigma2.sum();
  if (!(total > 0.0)) throw std::invalid_argument("extract_qubit_gate: zero cavity input");
  const Eigen::Index top = sigma2.size() - 1;
  const Vector v = eig.eigenvectors().col(top);
  const Vector g_flat = stacked * v;
  DenseMatrix gate(q, q);
  for (Eigen::Index j = 0; j < q; ++j) gate.col(j) = g_flat.segment(j * q, q);
  ExtractedGate out{OperatorMatrix(HilbertSpace::qubits_only(space.n_qubits()), std::move(gate)),
                    std::max(0.0, 1.0 - sigma2(top) / total), v.conjugate()};
  return out;
}

ExtractedGate extract_qubit_gate(const OperatorMatrix& u_full, const QuantumState& state) {
  if (!state.is_pure()) throw std::invalid_argument("extract_qubit_gate expects a pure state");
  if (!(state.space() == u_full.space())) throw std::invalid_argument("state and operator live on different spaces");
  // Row-major reshape: rows are qubit basis states, columns Fock levels.
  const auto q = static_cast<Eigen::Index>(state.space().qubit_dim());
  const auto f = static_cast<Eigen::Index>(state.space().fock_dim());
  DenseMatrix m(q, f);
  for (Eigen::Index i = 0; i < q; ++i) m.row(i) = state.amplitudes().segment(i * f, f).transpose();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(m.adjoint() * m);
  const Eigen::Index top = f - 1;
  if (eig.eigenvalues().sum() - eig.eigenvalues()(top) > 1e-12) {
    throw std::invalid_argument("extract_qubit_gate: state is not a qubit-cavity product");
  }
  // Right singular vector v of m; the cavity factor is conj(v).
  const Vector cavity = eig.eigenvectors().col(top).conjugate();
  return extract_qubit_gate(u_full, cavity);
}

DenseMatrix cavity_block(const OperatorMatrix& u_full, const Vector& cavity_in, const Vector& cavity_out) {
  const HilbertSpace& space = u_full.space();
  const auto f = static_cast<Eigen::Index>(space.fock_dim());
  const auto q = static_cast<Eigen::Index>(space.qubit_dim());
  if (cavity_in.size() != f || cavity_out.size() != f) {
    throw std::invalid_argument("cavity vector length must equal fock_dim");
  }
  DenseMatrix inputs = DenseMatrix::Zero(q * f, q);
  for (Eigen::Index j = 0; j < q; ++j) inputs.col(j).segment(j * f, f) = cavity_in;
  const DenseMatrix out = u_full.apply(inputs);
  DenseMatrix block(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index b = 0; b < q; ++b) block(b, j) = cavity_out.dot(out.col(j).segment(b * f, f));
  }
  return block;
}

std::string CavitySpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kVacuum:
      return "vacuum";
    case Kind::kFock:
      os << "fock(" << static_cast<int>(value) << ")";
      break;
    case Kind::kCoherent:
      os << "coherent(" << value << ")";
      break;
    case Kind::kThermal:
      os << "thermal(" << value << ")";
      break;
  }
  return os.str();
}

CavityState CavitySpec::build(int fock_dim) const {
  CavityState s;
  switch (kind) {
    case Kind::kVacuum:
      s = cavity_vacuum(fock_dim);
      break;
    case Kind::kFock:
      s = cavity_fock(fock_dim, static_cast<int>(value));
      break;
    case Kind::kCoherent:
      s = cavity_coherent(fock_dim, Complex(value, 0.0));
      break;
    case Kind::kThermal:
      s = cavity_thermal(fock_dim, value);
      break;
  }
  s.label = label();
  return s;
}

CavitySpec parse_cavity_spec(const std::string& text) {
  static const std::regex pattern(R"(\s*(vacuum|fock|coherent|thermal)\s*(?:\(\s*([-+0-9.eE]+)\s*\))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw std::invalid_argument("unknown cavity state '" + text + "'");
  CavitySpec s;
  const std::string kind = m[1];
  const bool has_value = m[2].matched;
  if (kind == "vacuum") {
    if (has_value) throw std::invalid_argument("vacuum takes no argument");
    return s;
  }
  if (!has_value) throw std::invalid_argument(kind + " needs an argument, e.g. " + kind + "(1)");
  s.value = std::stod(m[2]);
  if (kind == "fock") {
    s.kind = CavitySpec::Kind::kFock;
    if (s.value < 0.0 || s.value != std::floor(s.value)) throw std::invalid_argument("fock needs an integer >= 0");
  } else if (kind == "coherent") {
    s.kind = CavitySpec::Kind::kCoherent;
  } else {
    s.kind = CavitySpec::Kind::kThermal;
    if (s.value < 0.0) throw std::invalid_argument("thermal needs nbar >= 0");
  }
  return s;
}

std::vector<double> phase_residuals(const DenseMatrix& ideal, const DenseMatrix& actual) {
  require_same_shape(ideal, actual);
  const Complex overlap = (ideal.adjoint() * actual).trace();
  const double global = std::arg(overlap);
  std::vector<double> out(static_cast<std::size_t>(ideal.rows()));
  for (Eigen::Index k = 0; k < ideal.rows(); ++k) {
    out[static_cast<std::size_t>(k)] = wrap(std::arg(actual(k, k)) - std::arg(ideal(k, k)) - global);
  }
  return out;
}

FidelityReport cavity_insensitivity_suite(const PropagatorBuilder& builder, const DenseMatrix& ideal,
                                          const HilbertSpace& space, const std::vector<CavitySpec>& states,
                                          const SuiteOptions& options) {
  if (states.empty()) throw std::invalid_argument("cavity_insensitivity_suite needs at least one state");
  if (ideal.rows() != static_cast<Eigen::Index>(space.qubit_dim())) {
    throw std::invalid_argument("ideal gate does not act on the qubit register");
  }
  std::vector<CavityState> built;
  built.reserve(states.size());
  for (const auto& s : states) {
    built.push_back(s.build(space.fock_dim()));
    if (built.back().truncated_weight > options.tail_cutoff) {
      throw TruncationError(s.label() + ": weight " + std::to_string(built.back().truncated_weight) +
                            " beyond fock_dim " + std::to_string(space.fock_dim()) + " exceeds cutoff");
    }
  }

  const OperatorMatrix u = builder(space);
  const std::size_t d = space.qubit_dim();
  FidelityReport report;
  report.per_state.resize(states.size());
  DenseMatrix first_gate;
  parallel_for(states.size(), [&](std::size_t i) {
    StateFidelity row{built[i].label, 0.0, 0.0, 0.0, built[i].truncated_weight};
    for (const auto& member : built[i].members) {
      const ExtractedGate g = extract_qubit_gate(u, member.amplitudes);
      row.fidelity += member.weight * gate_fidelity(ideal, g.gate.dense());
      row.leakage += member.weight * g.leakage;
      if (i == 0 && &member == &built[i].members.front()) first_gate = g.gate.dense();
    }
    row.average_fidelity = average_gate_fidelity(row.fidelity, d);
    report.per_state[i] = row;
  });

  report.process_fidelity = report.per_state.front().fidelity;
  report.average_gate_fidelity = report.per_state.front().average_fidelity;
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& row : report.per_state) {
    lo = std::min(lo, row.fidelity);
    hi = std::max(hi, row.fidelity);
    report.leakage = std::max(report.leakage, row.leakage);
  }
  report.spread = hi - lo;

  const bool diagonal = (ideal - DenseMatrix(ideal.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal && built.front().is_pure()) report.phase_residuals = phase_residuals(ideal, first_gate);

  const int half = space.fock_dim() / 2;
  if (options.truncation_check && half >= 2) {
    const HilbertSpace small(space.n_qubits(), half);
    const CavityState s = states.front().build(half);
    const OperatorMatrix u_small = builder(small);
    double f_small = 0.0;
    for (const auto& member : s.members) {
      f_small += member.weight * gate_fidelity(ideal, extract_qubit_gate(u_small, member.amplitudes).gate.dense());
    }
    report.truncation = {true, space.fock_dim(), half, report.process_fidelity - f_small};
  }
  return report;
}

OperatorMatrix hadamard_conjugate(int n, const OperatorMatrix& u) {
  const HilbertSpace& space = u.space();
  if (n < 1 || n + 1 > space.n_qubits()) throw std::invalid_argument("hadamard_conjugate: need n + 1 qubits");
  DenseMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  const DenseMatrix id2 = DenseMatrix::Identity(2, 2);
  DenseMatrix w = DenseMatrix::Identity(1, 1);
  for (int j = 1; j <= space.n_qubits(); ++j) w = kron(w, (j >= 2 && j <= n + 1) ? h : id2);
  w = kron(w, DenseMatrix::Identity(space.fock_dim(), space.fock_dim()));
  const DenseMatrix out = w * u.dense() * w;
  OperatorMatrix result(space, out);
  return result.with_storage(u.storage());
}

}  // namespace ntcp
