#pragma once

// Truncated qubits-plus-cavity Hilbert space, operators and states.
//
// Basis ordering: qubit 1 is the most significant factor, the cavity Fock
// register is the least significant one. A basis index is therefore
//   index = qubit_bits * fock_dim + photon_number
// where bit (n_qubits - j) of qubit_bits holds the state of qubit j.
// Single-qubit convention: sigma_z |0> = +|0>, sigma_z |1> = -|1>,
// sigma_plus = |1><0|, sigma_minus = |0><1|.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ntcp {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Dimension at and above which builders default to sparse storage.
inline constexpr std::size_t kDenseStorageLimit = 2048;

struct BasisLabel {
  std::uint32_t qubit_bits = 0;
  int photons = 0;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

class HilbertSpace {
 public:
  /// Throws std::invalid_argument unless n_qubits >= 1 and fock_dim >= 1.
  HilbertSpace(int n_qubits, int fock_dim);

  /// Qubit register without a cavity (fock_dim = 1).
  static HilbertSpace qubits_only(int n_qubits) { return {n_qubits, 1}; }

  int n_qubits() const { return n_qubits_; }
  int fock_dim() const { return fock_dim_; }
  bool has_cavity() const { return fock_dim_ > 1; }
  std::size_t qubit_dim() const { return std::size_t{1} << n_qubits_; }
  std::size_t dimension() const { return qubit_dim() * static_cast<std::size_t>(fock_dim_); }

  std::size_t index(std::uint32_t qubit_bits, int photons) const;
  BasisLabel decode(std::size_t index) const;

  /// State (0 or 1) of 1-based qubit j inside a qubit bit string.
  int qubit_value(std::uint32_t qubit_bits, int j) const {
    return static_cast<int>((qubit_bits >> (n_qubits_ - j)) & 1u);
  }
  std::uint32_t qubit_mask(int j) const { return 1u << (n_qubits_ - j); }

  void check_qubit(int j) const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  int n_qubits_;
  int fock_dim_;
};

/// Validated factory: n_qubits >= 1, fock_dim >= 2.
HilbertSpace make_space(int n_qubits, int fock_dim);

enum class Storage { kDense, kSparse };

Storage default_storage(const HilbertSpace& space);

/// Complex operator on a HilbertSpace, stored dense or sparse.
class OperatorMatrix {
 public:
  OperatorMatrix(HilbertSpace space, DenseMatrix m);
  OperatorMatrix(HilbertSpace space, SparseMatrix m);

  static OperatorMatrix identity(const HilbertSpace& space);
  static OperatorMatrix zero(const HilbertSpace& space);

  const HilbertSpace& space() const { return space_; }
  Storage storage() const { return storage_; }
  std::size_t dimension() const { return space_.dimension(); }

  DenseMatrix dense() const;
  SparseMatrix sparse() const;
  /// Borrow the dense buffer; throws if storage is sparse.
  const DenseMatrix& dense_ref() const;

  OperatorMatrix with_storage(Storage s) const;
  OperatorMatrix with_default_storage() const { return with_storage(default_storage(space_)); }

  Complex coeff(std::size_t row, std::size_t col) const;

  OperatorMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;

  bool is_hermitian(double tol) const;
  bool is_unitary(double tol) const;
  /// ||U^dagger U - I||_max.
  double unitarity_defect() const;

  bool unitary_flag() const { return unitary_; }
  OperatorMatrix& mark_unitary(bool flag = true) {
    unitary_ = flag;
    return *this;
  }

  Vector apply(const Vector& v) const;
  DenseMatrix apply(const DenseMatrix& block) const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(Complex s);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(OperatorMatrix lhs, Complex s) { return lhs *= s; }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix rhs) { return rhs *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

 private:
  void require_same_space(const OperatorMatrix& other) const;

  HilbertSpace space_;
  Storage storage_;
  DenseMatrix dense_;
  SparseMatrix sparse_;
  bool unitary_ = false;
};

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Largest entrywise |a - b|.
double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b);

enum class PauliAxis { kX, kZ, kPlus, kMinus };
enum class Collective { kSz, kSx, kSplus, kSminus };
enum class CavityOp { kAnnihilate, kCreate, kNumber };

/// Single-qubit operator on 1-based qubit j, identity elsewhere.
OperatorMatrix pauli(int j, PauliAxis axis, const HilbertSpace& space);

/// Sum of the single-qubit operator over a nonempty qubit subset.
OperatorMatrix collective(Collective kind, const std::vector<int>& subset, const HilbertSpace& space);

/// All qubits 1..n_qubits.
std::vector<int> all_qubits(const HilbertSpace& space);
/// Qubits lo..hi inclusive.
std::vector<int> qubit_range(int lo, int hi);

OperatorMatrix cavity_op(CavityOp kind, const HilbertSpace& space);

/// exp(scale * M). Hermitian M with purely imaginary scale goes through an
/// eigendecomposition so the result is unitary to rounding; diagonal input
/// is exponentiated entrywise; anything else uses Pade scaling and squaring.
OperatorMatrix matexp(const OperatorMatrix& m, Complex scale);
DenseMatrix matexp(const DenseMatrix& m, Complex scale);

/// exp(scale * H) applied to a block of column vectors with a truncated
/// Taylor series, splitting into substeps so each factor has norm <= 1/2.
void exp_action(const SparseMatrix& h, Complex scale, DenseMatrix& block, DenseMatrix& work1,
                DenseMatrix& work2);

/// Kronecker product of dense matrices, left factor most significant.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

/// Pure vector or Boltzmann-style ensemble of (weight, vector) pairs.
class QuantumState {
 public:
  struct Member {
    double weight;
    Vector amplitudes;
  };

  static QuantumState pure(HilbertSpace space, Vector amplitudes);
  /// Weights must be nonnegative and sum to 1 within 1e-12.
  static QuantumState ensemble(HilbertSpace space, std::vector<Member> members);

  const HilbertSpace& space() const { return space_; }
  bool is_pure() const { return members_.size() == 1; }
  const std::vector<Member>& members() const { return members_; }
  const Vector& amplitudes() const;

  /// Largest |norm - 1| over members.
  double norm_error() const;

 private:
  QuantumState(HilbertSpace space, std::vector<Member> members)
      : space_(std::move(space)), members_(std::move(members)) {}

  HilbertSpace space_;
  std::vector<Member> members_;
};

/// Cavity-only state on Fock levels 0..fock_dim-1.
struct CavityState {
  std::string label;
  std::vector<QuantumState::Member> members;  // vectors of length fock_dim
  /// Probability mass the truncation could not represent.
  double truncated_weight = 0.0;

  bool is_pure() const { return members.size() == 1; }
};

CavityState cavity_vacuum(int fock_dim);
CavityState cavity_fock(int fock_dim, int photons);
CavityState cavity_coherent(int fock_dim, Complex alpha);
/// Boltzmann Fock ensemble with mean photon number nbar; members with weight
/// below cutoff are dropped and the rest renormalized.
CavityState cavity_thermal(int fock_dim, double nbar, double cutoff = 1e-6);

/// |qubit_bits> (x) |cavity vector>.
Vector product_vector(const HilbertSpace& space, std::uint32_t qubit_bits, const Vector& cavity);
/// qubit register vector (x) cavity vector.
Vector product_vector(const HilbertSpace& space, const Vector& qubits, const Vector& cavity);

}  // namespace ntcp
