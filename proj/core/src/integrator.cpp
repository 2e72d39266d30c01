#include "ntcp/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ntcp/parallel.hpp"

namespace ntcp {

namespace {

constexpr double kPeriodTol = 1e-9;

void check_interval(const TimeDependentHamiltonian& h, double t0, double t1, const IntegratorConfig& cfg) {
  if (!(t1 > t0)) throw std::invalid_argument("integration interval must satisfy t1 > t0");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("integrator tolerance must be positive");
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw std::invalid_argument("non-finite integration bounds");
  (void)h;
}

double one_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

long step_count(const TimeDependentHamiltonian& h, double t0, double t1, const IntegratorConfig& cfg) {
  const double span = t1 - t0;
  double step = cfg.step;
  if (step <= 0.0) {
    if (h.is_static() && cfg.method == IntegratorMethod::kPiecewiseExponential) return 1;
    const double w = std::max(h.max_frequency(), one_norm(h.static_part().sparse()));
    if (!(w > 0.0)) return 1;
    step = 2.0 * std::numbers::pi / (200.0 * w);
  }
  const double count = std::ceil(span / step * (1.0 - 1e-12));
  if (count > static_cast<double>(cfg.max_steps)) {
    throw IntegrationError("integration needs " + std::to_string(count) + " steps, above max_steps = " +
                           std::to_string(cfg.max_steps));
  }
  return std::max(1L, static_cast<long>(count));
}

void midpoint_steps(const TimeDependentHamiltonian& h, DenseMatrix& block, double t0, double dt, long n) {
  SparseMatrix hm = h.structure();
  DenseMatrix w1(block.rows(), block.cols());
  DenseMatrix w2(block.rows(), block.cols());
  const bool fixed = h.is_static();
  if (fixed) h.evaluate_into(t0, hm);
  for (long s = 0; s < n; ++s) {
    if (!fixed) h.evaluate_into(t0 + (static_cast<double>(s) + 0.5) * dt, hm);
    exp_action(hm, Complex(0.0, -dt), block, w1, w2);
  }
}

void rk4_steps(const TimeDependentHamiltonian& h, DenseMatrix& block, double t0, double dt, long n) {
  SparseMatrix ha = h.structure();
  SparseMatrix hb = h.structure();
  SparseMatrix hc = h.structure();
  DenseMatrix k1, k2, k3, k4;
  const Complex mi(0.0, -1.0);
  h.evaluate_into(t0, ha);
  for (long s = 0; s < n; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    h.evaluate_into(t + 0.5 * dt, hb);
    h.evaluate_into(t + dt, hc);
    k1.noalias() = mi * (ha * block);
    k2.noalias() = mi * (hb * (block + (0.5 * dt) * k1));
    k3.noalias() = mi * (hb * (block + (0.5 * dt) * k2));
    k4.noalias() = mi * (hc * (block + dt * k3));
    block += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    std::swap(ha, hc);
  }
}

void direct(const TimeDependentHamiltonian& h, DenseMatrix& block, double t0, double t1,
            const IntegratorConfig& cfg) {
  const long n = step_count(h, t0, t1, cfg);
  const double dt = (t1 - t0) / static_cast<double>(n);
  if (cfg.method == IntegratorMethod::kRk4) {
    rk4_steps(h, block, t0, dt, n);
  } else {
    midpoint_steps(h, block, t0, dt, n);
  }
}

// Column-parallel direct evolution.
void direct_parallel(const TimeDependentHamiltonian& h, DenseMatrix& block, double t0, double t1,
                     const IntegratorConfig& cfg) {
  const auto cols = static_cast<std::size_t>(block.cols());
  const std::size_t chunks = std::min<std::size_t>(thread_count(), cols);
  if (chunks <= 1) {
    direct(h, block, t0, t1, cfg);
    return;
  }
  const std::size_t width = (cols + chunks - 1) / chunks;
  parallel_for(chunks, [&](std::size_t c) {
    const auto lo = static_cast<Eigen::Index>(c * width);
    const auto count = std::min<Eigen::Index>(static_cast<Eigen::Index>(width), block.cols() - lo);
    if (count <= 0) return;
    DenseMatrix part = block.middleCols(lo, count);
    direct(h, part, t0, t1, cfg);
    block.middleCols(lo, count) = part;
  });
}

DenseMatrix matrix_power(DenseMatrix base, long n) {
  DenseMatrix result = DenseMatrix::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) result = base * result;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

long period_count(const TimeDependentHamiltonian& h, double t0, double t1, const IntegratorConfig& cfg) {
  if (!cfg.use_periodicity || h.is_static() || !h.period()) return 0;
  const double periods = (t1 - t0) / *h.period();
  const double rounded = std::round(periods);
  if (rounded < 2.0 || std::abs(periods - rounded) > kPeriodTol * rounded) return 0;
  return static_cast<long>(rounded);
}

void check_norms(const Eigen::VectorXd& before, const DenseMatrix& after, double tol) {
  if (!after.allFinite()) throw IntegrationError("non-finite amplitudes during integration");
  for (Eigen::Index c = 0; c < after.cols(); ++c) {
    const double drift = std::abs(after.col(c).norm() - before(c));
    if (drift > tol) {
      throw IntegrationError("norm drift " + std::to_string(drift) + " exceeds tolerance " + std::to_string(tol) +
                             "; reduce the step");
    }
  }
}

}  // namespace

double resolve_step(const TimeDependentHamiltonian& h, double t0, double t1, const IntegratorConfig& cfg) {
  check_interval(h, t0, t1, cfg);
  return (t1 - t0) / static_cast<double>(step_count(h, t0, t1, cfg));
}

void evolve_block(const TimeDependentHamiltonian& h, DenseMatrix& block, double t0, double t1,
                  const IntegratorConfig& cfg) {
  check_interval(h, t0, t1, cfg);
  if (block.rows() != static_cast<Eigen::Index>(h.space().dimension())) {
    throw std::invalid_argument("state block does not match the Hamiltonian's space");
  }
  const Eigen::VectorXd before = block.colwise().norm().transpose();
  const long periods = period_count(h, t0, t1, cfg);
  const auto d = block.rows();
  if (periods > 0 && d <= static_cast<Eigen::Index>(kDenseStorageLimit)) {
    DenseMatrix one = DenseMatrix::Identity(d, d);
    direct_parallel(h, one, t0, t0 + *h.period(), cfg);
    check_norms(Eigen::VectorXd::Ones(d), one, cfg.tolerance);
    block = matrix_power(one, periods) * block;
  } else {
    direct_parallel(h, block, t0, t1, cfg);
  }
  check_norms(before, block, cfg.tolerance);
}

QuantumState evolve_state(const TimeDependentHamiltonian& h, const QuantumState& psi0, double t0, double t1,
                          const IntegratorConfig& cfg) {
  if (!(psi0.space() == h.space())) throw std::invalid_argument("state and Hamiltonian live on different spaces");
  const auto& members = psi0.members();
  DenseMatrix block(static_cast<Eigen::Index>(h.space().dimension()), static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) block.col(static_cast<Eigen::Index>(i)) = members[i].amplitudes;
  evolve_block(h, block, t0, t1, cfg);
  std::vector<QuantumState::Member> out;
  out.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    Vector v = block.col(static_cast<Eigen::Index>(i));
    v /= v.norm();
    out.push_back({members[i].weight, std::move(v)});
  }
  return QuantumState::ensemble(h.space(), std::move(out));
}

OperatorMatrix propagator_of(const TimeDependentHamiltonian& h, double t0, double t1, const IntegratorConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(h.space().dimension());
  DenseMatrix block = DenseMatrix::Identity(d, d);
  evolve_block(h, block, t0, t1, cfg);
  OperatorMatrix u(h.space(), std::move(block));
  u.mark_unitary(u.unitarity_defect() <= cfg.tolerance);
  return u;
}

ConvergenceEstimate convergence_order(const TimeDependentHamiltonian& h, const QuantumState& psi0, double t,
                                      IntegratorConfig cfg) {
  if (!psi0.is_pure()) throw std::invalid_argument("convergence_order expects a pure state");
  cfg.use_periodicity = false;
  cfg.step = resolve_step(h, 0.0, t, cfg);
  cfg.tolerance = std::numeric_limits<double>::max();
  ConvergenceEstimate est;
  std::vector<Vector> finals;
  for (int k = 0; k < 5; ++k) {
    DenseMatrix block = psi0.amplitudes();
    evolve_block(h, block, 0.0, t, cfg);
    est.steps.push_back(cfg.step);
    finals.emplace_back(block.col(0));
    cfg.step *= 0.5;
  }
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) est.differences.push_back((finals[k] - finals[k + 1]).norm());
  constexpr double kFloor = 1e-13;
  est.exact = std::all_of(est.differences.begin(), est.differences.end(), [](double e) { return e < kFloor; });
  if (est.exact) return est;
  for (std::size_t k = 0; k + 1 < est.differences.size(); ++k) {
    if (est.differences[k + 1] < kFloor) break;
    est.orders.push_back(std::log2(est.differences[k] / est.differences[k + 1]));
  }
  if (!est.orders.empty()) est.order = est.orders.back();
  return est;
}

}  // namespace ntcp
