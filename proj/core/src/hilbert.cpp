#include "ntcp/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace ntcp {

HilbertSpace::HilbertSpace(int n_qubits, int fock_dim) : n_qubits_(n_qubits), fock_dim_(fock_dim) {
  if (n_qubits < 1 || n_qubits > 20) {
    throw std::invalid_argument("n_qubits must be in [1, 20], got " + std::to_string(n_qubits));
  }
  if (fock_dim < 1) {
    throw std::invalid_argument("fock_dim must be positive, got " + std::to_string(fock_dim));
  }
}

std::size_t HilbertSpace::index(std::uint32_t qubit_bits, int photons) const {
  if (qubit_bits >= qubit_dim() || photons < 0 || photons >= fock_dim_) {
    throw std::out_of_range("basis label outside the space");
  }
  return static_cast<std::size_t>(qubit_bits) * static_cast<std::size_t>(fock_dim_) +
         static_cast<std::size_t>(photons);
}

BasisLabel HilbertSpace::decode(std::size_t index) const {
  if (index >= dimension()) throw std::out_of_range("basis index outside the space");
  const auto f = static_cast<std::size_t>(fock_dim_);
  return {static_cast<std::uint32_t>(index / f), static_cast<int>(index % f)};
}

void HilbertSpace::check_qubit(int j) const {
  if (j < 1 || j > n_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(j) + " outside 1.." +
                            std::to_string(n_qubits_));
  }
}

HilbertSpace make_space(int n_qubits, int fock_dim) {
  if (n_qubits < 1) throw std::invalid_argument("make_space: n_qubits must be >= 1");
  if (fock_dim < 2) throw std::invalid_argument("make_space: fock_dim must be >= 2");
  return {n_qubits, fock_dim};
}

Storage default_storage(const HilbertSpace& space) {
  return space.dimension() < kDenseStorageLimit ? Storage::kDense : Storage::kSparse;
}

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(HilbertSpace space, DenseMatrix m)
    : space_(std::move(space)), storage_(Storage::kDense), dense_(std::move(m)) {
  const auto d = static_cast<Eigen::Index>(space_.dimension());
  if (dense_.rows() != d || dense_.cols() != d) {
    throw std::invalid_argument("operator shape does not match space dimension");
  }
}

OperatorMatrix::OperatorMatrix(HilbertSpace space, SparseMatrix m)
    : space_(std::move(space)), storage_(Storage::kSparse), sparse_(std::move(m)) {
  const auto d = static_cast<Eigen::Index>(space_.dimension());
  if (sparse_.rows() != d || sparse_.cols() != d) {
    throw std::invalid_argument("operator shape does not match space dimension");
  }
  sparse_.makeCompressed();
}

OperatorMatrix OperatorMatrix::identity(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix id(d, d);
  id.setIdentity();
  OperatorMatrix out(space, std::move(id));
  out.unitary_ = true;
  return out.with_default_storage().mark_unitary();
}

OperatorMatrix OperatorMatrix::zero(const HilbertSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dimension());
  return OperatorMatrix(space, SparseMatrix(d, d)).with_default_storage();
}

DenseMatrix OperatorMatrix::dense() const {
  if (storage_ == Storage::kDense) return dense_;
  return DenseMatrix(sparse_);
}

SparseMatrix OperatorMatrix::sparse() const {
  if (storage_ == Storage::kSparse) return sparse_;
  SparseMatrix s = dense_.sparseView(Complex{0.0}, 0.0);
  s.prune(Complex{0.0}, 0.0);
  s.makeCompressed();
  return s;
}

const DenseMatrix& OperatorMatrix::dense_ref() const {
  if (storage_ != Storage::kDense) throw std::logic_error("dense_ref on sparse operator");
  return dense_;
}

OperatorMatrix OperatorMatrix::with_storage(Storage s) const {
  if (s == storage_) return *this;
  OperatorMatrix out = s == Storage::kDense ? OperatorMatrix(space_, dense()) : OperatorMatrix(space_, sparse());
  out.unitary_ = unitary_;
  return out;
}

Complex OperatorMatrix::coeff(std::size_t row, std::size_t col) const {
  const auto r = static_cast<Eigen::Index>(row);
  const auto c = static_cast<Eigen::Index>(col);
  return storage_ == Storage::kDense ? dense_(r, c) : sparse_.coeff(r, c);
}

OperatorMatrix OperatorMatrix::adjoint() const {
  OperatorMatrix out = storage_ == Storage::kDense ? OperatorMatrix(space_, DenseMatrix(dense_.adjoint()))
                                                   : OperatorMatrix(space_, SparseMatrix(sparse_.adjoint()));
  out.unitary_ = unitary_;
  return out;
}

Complex OperatorMatrix::trace() const {
  if (storage_ == Storage::kDense) return dense_.trace();
  Complex t{0.0};
  for (Eigen::Index k = 0; k < sparse_.outerSize(); ++k) t += sparse_.coeff(k, k);
  return t;
}

double OperatorMatrix::max_abs() const {
  if (storage_ == Storage::kDense) return dense_.size() == 0 ? 0.0 : dense_.cwiseAbs().maxCoeff();
  double m = 0.0;
  for (Eigen::Index k = 0; k < sparse_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(sparse_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

bool OperatorMatrix::is_hermitian(double tol) const { return max_abs_diff(*this, adjoint()) <= tol; }

double OperatorMatrix::unitarity_defect() const {
  const DenseMatrix u = dense();
  const DenseMatrix prod = u.adjoint() * u;
  return (prod - DenseMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_unitary(double tol) const { return unitarity_defect() <= tol; }

Vector OperatorMatrix::apply(const Vector& v) const {
  if (v.size() != static_cast<Eigen::Index>(dimension())) throw std::invalid_argument("vector size mismatch");
  return storage_ == Storage::kDense ? Vector(dense_ * v) : Vector(sparse_ * v);
}

DenseMatrix OperatorMatrix::apply(const DenseMatrix& block) const {
  if (block.rows() != static_cast<Eigen::Index>(dimension())) {
    throw std::invalid_argument("block row count mismatch");
  }
  return storage_ == Storage::kDense ? DenseMatrix(dense_ * block) : DenseMatrix(sparse_ * block);
}

void OperatorMatrix::require_same_space(const OperatorMatrix& other) const {
  if (!(space_ == other.space_)) throw std::invalid_argument("operators live on different spaces");
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  require_same_space(rhs);
  if (storage_ == Storage::kSparse && rhs.storage_ == Storage::kSparse) {
    sparse_ = sparse_ + rhs.sparse_;
  } else {
    dense_ = dense() + rhs.dense();
    sparse_ = SparseMatrix();
    storage_ = Storage::kDense;
  }
  unitary_ = false;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  require_same_space(rhs);
  if (storage_ == Storage::kSparse && rhs.storage_ == Storage::kSparse) {
    sparse_ = sparse_ - rhs.sparse_;
  } else {
    dense_ = dense() - rhs.dense();
    sparse_ = SparseMatrix();
    storage_ = Storage::kDense;
  }
  unitary_ = false;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex s) {
  if (storage_ == Storage::kDense) {
    dense_ *= s;
  } else {
    sparse_ *= s;
  }
  unitary_ = unitary_ && std::abs(std::abs(s) - 1.0) < 1e-15;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  lhs.require_same_space(rhs);
  OperatorMatrix out = [&] {
    if (lhs.storage_ == Storage::kSparse && rhs.storage_ == Storage::kSparse) {
      return OperatorMatrix(lhs.space_, SparseMatrix(lhs.sparse_ * rhs.sparse_));
    }
    if (lhs.storage_ == Storage::kSparse) return OperatorMatrix(lhs.space_, DenseMatrix(lhs.sparse_ * rhs.dense_));
    if (rhs.storage_ == Storage::kSparse) return OperatorMatrix(lhs.space_, DenseMatrix(lhs.dense_ * rhs.sparse_));
    return OperatorMatrix(lhs.space_, DenseMatrix(lhs.dense_ * rhs.dense_));
  }();
  out.unitary_ = lhs.unitary_ && rhs.unitary_;
  return out;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b - b * a; }

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) { return (a - b).max_abs(); }

// ---------------------------------------------------------------------------
// Elementary operators

namespace {

// 2x2 entries (row, col, value) in the {|0>, |1>} basis.
struct Entry2 {
  int row;
  int col;
  Complex value;
};

std::vector<Entry2> single_qubit_entries(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::kZ:
      return {{0, 0, 1.0}, {1, 1, -1.0}};
    case PauliAxis::kX:
      return {{0, 1, 1.0}, {1, 0, 1.0}};
    case PauliAxis::kPlus:
      return {{1, 0, 1.0}};
    case PauliAxis::kMinus:
      return {{0, 1, 1.0}};
  }
  return {};
}

SparseMatrix single_qubit_sparse(int j, PauliAxis axis, const HilbertSpace& space) {
  space.check_qubit(j);
  const auto entries = single_qubit_entries(axis);
  const std::uint32_t mask = space.qubit_mask(j);
  const int f = space.fock_dim();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(space.dimension());
  for (std::uint32_t bits = 0; bits < space.qubit_dim(); ++bits) {
    const int col_value = space.qubit_value(bits, j);
    for (const auto& e : entries) {
      if (e.col != col_value) continue;
      const std::uint32_t row_bits = e.row == 1 ? (bits | mask) : (bits & ~mask);
      for (int n = 0; n < f; ++n) {
        triplets.emplace_back(static_cast<Eigen::Index>(space.index(row_bits, n)),
                              static_cast<Eigen::Index>(space.index(bits, n)), e.value);
      }
    }
  }
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

PauliAxis axis_of(Collective kind) {
  switch (kind) {
    case Collective::kSz:
      return PauliAxis::kZ;
    case Collective::kSx:
      return PauliAxis::kX;
    case Collective::kSplus:
      return PauliAxis::kPlus;
    case Collective::kSminus:
      return PauliAxis::kMinus;
  }
  return PauliAxis::kZ;
}

}  // namespace

OperatorMatrix pauli(int j, PauliAxis axis, const HilbertSpace& space) {
  return OperatorMatrix(space, single_qubit_sparse(j, axis, space)).with_default_storage();
}

OperatorMatrix collective(Collective kind, const std::vector<int>& subset, const HilbertSpace& space) {
  if (subset.empty()) throw std::invalid_argument("collective operator needs a nonempty qubit subset");
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix sum(d, d);
  for (int j : subset) sum += single_qubit_sparse(j, axis_of(kind), space);
  return OperatorMatrix(space, std::move(sum)).with_default_storage();
}

std::vector<int> all_qubits(const HilbertSpace& space) { return qubit_range(1, space.n_qubits()); }

std::vector<int> qubit_range(int lo, int hi) {
  std::vector<int> out;
  for (int j = lo; j <= hi; ++j) out.push_back(j);
  return out;
}

OperatorMatrix cavity_op(CavityOp kind, const HilbertSpace& space) {
  const int f = space.fock_dim();
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::uint32_t bits = 0; bits < space.qubit_dim(); ++bits) {
    for (int n = 0; n < f; ++n) {
      const auto col = static_cast<Eigen::Index>(space.index(bits, n));
      switch (kind) {
        case CavityOp::kAnnihilate:
          if (n > 0) {
            triplets.emplace_back(static_cast<Eigen::Index>(space.index(bits, n - 1)), col, std::sqrt(double(n)));
          }
          break;
        case CavityOp::kCreate:
          if (n + 1 < f) {
            triplets.emplace_back(static_cast<Eigen::Index>(space.index(bits, n + 1)), col,
                                  std::sqrt(double(n + 1)));
          }
          break;
        case CavityOp::kNumber:
          if (n > 0) triplets.emplace_back(col, col, double(n));
          break;
      }
    }
  }
  const auto d = static_cast<Eigen::Index>(space.dimension());
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(space, std::move(m)).with_default_storage();
}

// ---------------------------------------------------------------------------
// Matrix exponentials

namespace {

void require_finite(const DenseMatrix& m, const char* what) {
  if (!m.allFinite()) throw std::domain_error(std::string(what) + ": non-finite entries");
}

bool is_diagonal(const DenseMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex{0.0}) return false;
    }
  }
  return true;
}

}  // namespace

DenseMatrix matexp(const DenseMatrix& m, Complex scale) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matexp needs a square matrix");
  require_finite(m, "matexp");
  if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag())) {
    throw std::domain_error("matexp: non-finite scale");
  }
  const Eigen::Index d = m.rows();
  if (is_diagonal(m)) {
    DenseMatrix out = DenseMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) out(k, k) = std::exp(scale * m(k, k));
    return out;
  }
  const double scale_norm = std::abs(scale);
  const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double mag = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (scale.real() == 0.0 && herm_defect <= 1e-14 * mag) {
    const DenseMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
    if (eig.info() != Eigen::Success) throw std::runtime_error("matexp: eigendecomposition failed");
    const Vector phases = (scale * eig.eigenvalues().cast<Complex>()).array().exp();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
  DenseMatrix scaled = scale * m;
  DenseMatrix out = scaled.exp();
  if (!out.allFinite()) {
    throw std::domain_error("matexp: overflow for ||scale*M|| = " + std::to_string(scale_norm));
  }
  return out;
}

OperatorMatrix matexp(const OperatorMatrix& m, Complex scale) {
  OperatorMatrix out(m.space(), matexp(m.dense(), scale));
  if (scale.real() == 0.0 && m.is_hermitian(1e-12 * std::max(1.0, m.max_abs()))) out.mark_unitary();
  return out;
}

void exp_action(const SparseMatrix& h, Complex scale, DenseMatrix& block, DenseMatrix& term, DenseMatrix& next) {
  double col_norm = 0.0;
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) s += std::abs(it.value());
    col_norm = std::max(col_norm, s);
  }
  const double total = col_norm * std::abs(scale);
  if (!std::isfinite(total)) throw std::domain_error("exp_action: non-finite operator norm");
  const int substeps = std::max(1, static_cast<int>(std::ceil(total / 0.5)));
  const Complex sub_scale = scale / static_cast<double>(substeps);
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int s = 0; s < substeps; ++s) {
    term = block;
    for (int k = 1; k <= 40; ++k) {
      next.noalias() = h * term;
      term = next * (sub_scale / static_cast<double>(k));
      block += term;
      if (term.norm() <= 0.25 * kEps * block.norm()) break;
    }
  }
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

// ---------------------------------------------------------------------------
// States

QuantumState QuantumState::pure(HilbertSpace space, Vector amplitudes) {
  if (amplitudes.size() != static_cast<Eigen::Index>(space.dimension())) {
    throw std::invalid_argument("state vector size does not match space dimension");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw std::invalid_argument("pure state must be normalized");
  std::vector<Member> members{{1.0, std::move(amplitudes)}};
  return QuantumState(std::move(space), std::move(members));
}

QuantumState QuantumState::ensemble(HilbertSpace space, std::vector<Member> members) {
  if (members.empty()) throw std::invalid_argument("ensemble needs at least one member");
  double total = 0.0;
  for (const auto& m : members) {
    if (m.weight < 0.0) throw std::invalid_argument("ensemble weights must be nonnegative");
    if (m.amplitudes.size() != static_cast<Eigen::Index>(space.dimension())) {
      throw std::invalid_argument("ensemble member size does not match space dimension");
    }
    if (std::abs(m.amplitudes.norm() - 1.0) > 1e-10) throw std::invalid_argument("ensemble member not normalized");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("ensemble weights must sum to 1");
  return QuantumState(std::move(space), std::move(members));
}

const Vector& QuantumState::amplitudes() const {
  if (!is_pure()) throw std::logic_error("amplitudes() on a mixed state");
  return members_.front().amplitudes;
}

double QuantumState::norm_error() const {
  double e = 0.0;
  for (const auto& m : members_) e = std::max(e, std::abs(m.amplitudes.norm() - 1.0));
  return e;
}

namespace {

Vector fock_vector(int fock_dim, int n) {
  Vector v = Vector::Zero(fock_dim);
  v(n) = 1.0;
  return v;
}

}  // namespace

CavityState cavity_vacuum(int fock_dim) {
  if (fock_dim < 1) throw std::invalid_argument("fock_dim must be positive");
  return {"vacuum", {{1.0, fock_vector(fock_dim, 0)}}, 0.0};
}

CavityState cavity_fock(int fock_dim, int photons) {
  if (photons < 0) throw std::invalid_argument("photon number must be nonnegative");
  if (photons >= fock_dim) {
    return {"fock(" + std::to_string(photons) + ")", {{1.0, fock_vector(fock_dim, 0)}}, 1.0};
  }
  return {"fock(" + std::to_string(photons) + ")", {{1.0, fock_vector(fock_dim, photons)}}, 0.0};
}

CavityState cavity_coherent(int fock_dim, Complex alpha) {
  Vector v(fock_dim);
  const double env = std::exp(-0.5 * std::norm(alpha));
  Complex c = env;
  for (int n = 0; n < fock_dim; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  const double kept = v.squaredNorm();
  v /= std::sqrt(kept);
  std::ostringstream label;
  label << "coherent(" << alpha.real();
  if (alpha.imag() != 0.0) label << (alpha.imag() > 0 ? "+" : "") << alpha.imag() << "i";
  label << ")";
  return {label.str(), {{1.0, std::move(v)}}, std::max(0.0, 1.0 - kept)};
}

CavityState cavity_thermal(int fock_dim, double nbar, double cutoff) {
  if (nbar < 0.0) throw std::invalid_argument("mean photon number must be nonnegative");
  std::ostringstream label;
  label << "thermal(" << nbar << ")";
  if (nbar == 0.0) return {label.str(), {{1.0, fock_vector(fock_dim, 0)}}, 0.0};
  const double ratio = nbar / (nbar + 1.0);
  std::vector<QuantumState::Member> members;
  double kept = 0.0;
  double p = 1.0 / (nbar + 1.0);
  for (int n = 0; n < fock_dim; ++n, p *= ratio) {
    if (p < cutoff) break;
    members.push_back({p, fock_vector(fock_dim, n)});
    kept += p;
  }
  for (auto& m : members) m.weight /= kept;
  return {label.str(), std::move(members), std::pow(ratio, fock_dim)};
}

Vector product_vector(const HilbertSpace& space, std::uint32_t qubit_bits, const Vector& cavity) {
  Vector q = Vector::Zero(static_cast<Eigen::Index>(space.qubit_dim()));
  q(qubit_bits) = 1.0;
  return product_vector(space, q, cavity);
}

Vector product_vector(const HilbertSpace& space, const Vector& qubits, const Vector& cavity) {
  if (qubits.size() != static_cast<Eigen::Index>(space.qubit_dim()) || cavity.size() != space.fock_dim()) {
    throw std::invalid_argument("product_vector: factor sizes do not match the space");
  }
  return Eigen::kroneckerProduct(qubits, cavity).eval();
}

}  // namespace ntcp
