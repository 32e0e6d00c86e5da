#pragma once

/**
 * @file qevolve.hpp
 * @brief Unrestricted Schrödinger evolution iħ∂_t|ψ⟩ = 𝓗|ψ⟩ in the truncated
 *        twisted basis, and its comparison with the enhanced-classical flow.
 *
 * With S|n,α⟩ = |n+1,α⟩ (the action of e^{iQ}),
 *
 *     cos kQ → (S^k + S^{-k})/2,   sin kQ → (S^k - S^{-k})/(2i),
 *
 * so ⟨n+k,α|𝓗|n,α⟩ = (a_k - i b_k)/2 and the diagonal is ħ²(n+α)² + a_0.
 * Propagation uses one Hermitian eigendecomposition; there is no time-stepping
 * error on the quantum side.
 *
 * Position on the circle is tracked through ⟨e^{iQ}⟩, never ⟨Q⟩.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eqcircle/coherent.hpp"
#include "eqcircle/dynamics.hpp"
#include "eqcircle/enhanced.hpp"
#include "eqcircle/errors.hpp"
#include "eqcircle/hilbert.hpp"

namespace eqcircle {

struct HamiltonianMatrix {
  TwistedBasis basis;
  int bandwidth = 0;
  Eigen::MatrixXcd matrix;  // row/column s ↔ lattice index n = s - N

  std::size_t dimension() const noexcept { return basis.dimension(); }
  complex element(int m, int n) const { return matrix(basis.slot(m), basis.slot(n)); }
};

/// (1/2π) ∫ e^{-i(m+α)θ} 𝓗 e^{i(n+α)θ} dθ, with P_α² acting on the basis
/// function exactly and the potential part by trapezoidal quadrature.
inline complex matrix_element_quadrature(const TrigPotential& V, const TwistedBasis& basis, int m, int n,
                                         const QuadratureGrid& grid = QuadratureGrid()) {
  const complex potential = integrate_periodic(
      [&](double t) { return std::polar(1.0, static_cast<double>(n - m) * t) * V.value(t); }, grid) / two_pi;
  const double kinetic = m == n ? std::pow(momentum_eigenvalue(basis, n), 2) : 0.0;
  return kinetic + potential;
}

/// Largest |H_mn - quadrature element| over the whole matrix.
inline double matrix_quadrature_defect(const HamiltonianMatrix& H, const TrigPotential& V, const QuadratureGrid& grid = QuadratureGrid()) {
  const int N = H.basis.cutoff();
  double worst = 0.0;
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n) worst = std::max(worst, std::abs(H.element(m, n) - matrix_element_quadrature(V, H.basis, m, n, grid)));
  return worst;
}

/// Banded Hermitian matrix of P_α² + V(Q). With `verify` set, every entry is
/// checked against quadrature and a mismatch above 1e-10 throws.
inline HamiltonianMatrix build_hamiltonian(const TrigPotential& V, const TwistedBasis& basis, bool verify = false) {
  const int N = basis.cutoff();
  if (N <= V.degree())
    throw DomainError("build_hamiltonian: cutoff " + std::to_string(N) + " must exceed potential degree " + std::to_string(V.degree()));
  HamiltonianMatrix H{basis, V.degree(), Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension())};
  for (int n = -N; n <= N; ++n) {
    const double p = momentum_eigenvalue(basis, n);
    H.matrix(basis.slot(n), basis.slot(n)) = p * p + V.a0();
  }
  for (int k = 1; k <= V.degree(); ++k) {
    const complex below(0.5 * V.a(k), -0.5 * V.b(k));  // ⟨n+k|𝓗|n⟩
    for (int n = -N; n + k <= N; ++n) {
      H.matrix(basis.slot(n + k), basis.slot(n)) = below;
      H.matrix(basis.slot(n), basis.slot(n + k)) = std::conj(below);
    }
  }
  if (verify) {
    const double defect = matrix_quadrature_defect(H, V);
    if (defect > 1e-10)
      throw ContractViolation("build_hamiltonian: matrix disagrees with quadrature by " + std::to_string(defect));
  }
  return H;
}

inline Eigen::VectorXcd to_eigen(const MomentumState& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.coeffs().data(), static_cast<Eigen::Index>(s.coeffs().size()));
}

inline MomentumState from_eigen(const TwistedBasis& basis, const Eigen::VectorXcd& v) {
  return MomentumState(basis, std::vector<complex>(v.data(), v.data() + v.size()));
}

/// ⟨ψ|e^{iQ}|ψ⟩ = Σ_n conj(c_{n+1}) c_n.
inline complex expect_exp_iq(const MomentumState& s) {
  const int N = s.basis().cutoff();
  complex sum{};
  for (int n = -N; n < N; ++n) sum += std::conj(s[n + 1]) * s[n];
  return sum;
}

inline double expect_momentum(const MomentumState& s) {
  const int N = s.basis().cutoff();
  double sum = 0.0;
  for (int n = -N; n <= N; ++n) sum += momentum_eigenvalue(s.basis(), n) * std::norm(s[n]);
  return sum;
}

inline double expect_energy(const HamiltonianMatrix& H, const MomentumState& s) {
  const Eigen::VectorXcd v = to_eigen(s);
  return v.dot(H.matrix * v).real();
}

/// e^{-iHt/ħ} from a single eigendecomposition.
class QuantumPropagator {
public:
  explicit QuantumPropagator(const HamiltonianMatrix& H) : basis_(H.basis) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.matrix);
    if (solver.info() != Eigen::Success) throw ContractViolation("QuantumPropagator: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const noexcept { return eigenvectors_; }

  /// Components of `initial` in the eigenbasis.
  Eigen::VectorXcd project(const MomentumState& initial) const { return eigenvectors_.adjoint() * to_eigen(initial); }

  MomentumState state_at(const Eigen::VectorXcd& projected, double t) const {
    const double hbar = basis_.hbar();
    Eigen::VectorXcd phased(projected.size());
    for (Eigen::Index i = 0; i < projected.size(); ++i) phased(i) = std::polar(1.0, -eigenvalues_(i) * t / hbar) * projected(i);
    return from_eigen(basis_, eigenvectors_ * phased);
  }

private:
  TwistedBasis basis_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

struct ExpectationTrace {
  std::vector<double> times;
  std::vector<double> cos_q;
  std::vector<double> sin_q;
  std::vector<double> mean_p;
  std::vector<double> norm;
  std::vector<double> energy;

  std::size_t size() const noexcept { return times.size(); }
};

inline ExpectationTrace evolve_quantum(const HamiltonianMatrix& H, const MomentumState& initial, double dt, long steps) {
  if (!initial.basis().same_space(H.basis)) throw DomainError("evolve_quantum: initial state and Hamiltonian use different bases");
  if (!initial.is_normalized(1e-8)) throw DomainError("evolve_quantum: initial state is not normalized");
  if (!(dt > 0.0) || steps < 0) throw DomainError("evolve_quantum: need dt > 0 and steps >= 0");
  const QuantumPropagator U(H);
  const Eigen::VectorXcd projected = U.project(initial);
  ExpectationTrace trace;
  for (long k = 0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    const MomentumState psi = U.state_at(projected, t);
    const complex e = expect_exp_iq(psi);
    trace.times.push_back(t);
    trace.cos_q.push_back(e.real());
    trace.sin_q.push_back(e.imag());
    trace.mean_p.push_back(expect_momentum(psi));
    trace.norm.push_back(psi.norm_squared());
    trace.energy.push_back(expect_energy(H, psi));
  }
  return trace;
}

struct ComparisonReport {
  std::vector<double> times;
  std::vector<double> phase_deviation;  // |e^{i q_enh(t)} - ⟨e^{iQ}⟩/|⟨e^{iQ}⟩||
  std::vector<double> momentum_deviation;  // |⟨P_α⟩ - (p_enh + ħα)|
  double max_phase_deviation = 0.0;
  double max_momentum_deviation = 0.0;
  double ehrenfest_time = 0.0;  // end of the initial stretch with phase deviation < threshold
  bool window_closed = false;  // deviation reached the threshold before T
  Trajectory enhanced;
  ExpectationTrace quantum;
};

inline constexpr double ehrenfest_threshold = 0.1;

/// Quantum evolution of |p,q⟩ against the enhanced-classical trajectory
/// started at (p, q), on a common time grid of step dt up to T.
inline ComparisonReport compare_restricted(const EnhancedHamiltonian& model, const TwistedBasis& basis, const CoherentLabel& label,
                                           double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw DomainError("compare_restricted: need T > 0 and dt > 0");
  const long steps = std::max(1L, std::lround(T / dt));
  ComparisonReport report;
  report.enhanced = evolve(HamiltonianKind::enhanced, model, PhasePoint::at(label.q, label.p), dt, steps);
  const HamiltonianMatrix H = build_hamiltonian(model.potential(), basis);
  report.quantum = evolve_quantum(H, coherent_state(label, model.spec(), basis), dt, steps);
  report.times = report.quantum.times;
  const double twist = model.twist_momentum();
  report.ehrenfest_time = report.times.back();
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const complex e(report.quantum.cos_q[k], report.quantum.sin_q[k]);
    const double mag = std::abs(e);
    const complex unit = mag > 0.0 ? e / mag : complex{};
    const double dev = std::abs(std::polar(1.0, report.enhanced.points[k].q) - unit);
    const double pdev = std::abs(report.quantum.mean_p[k] - (report.enhanced.points[k].p + twist));
    report.phase_deviation.push_back(dev);
    report.momentum_deviation.push_back(pdev);
    report.max_phase_deviation = std::max(report.max_phase_deviation, dev);
    report.max_momentum_deviation = std::max(report.max_momentum_deviation, pdev);
    if (!report.window_closed && dev >= ehrenfest_threshold) {
      report.window_closed = true;
      report.ehrenfest_time = report.times[k];
    }
  }
  return report;
}

} // namespace eqcircle
