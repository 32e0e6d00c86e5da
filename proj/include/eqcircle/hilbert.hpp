#pragma once

// Truncated Hilbert space of the twisted momentum P_α on the circle.
//
// Basis vectors |n,α⟩, n ∈ [-N, N], have wavefunctions e^{i(n+α)θ}/√(2π) and
// eigenvalues ħ(n+α). Every one of them obeys φ(π) = e^{2πiα} φ(-π), so any
// finite combination lies in the twisted domain.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "eqcircle/errors.hpp"
#include "eqcircle/specfun.hpp"

namespace eqcircle {

/// Reduce a twist to [0, 1).
inline double reduce_twist(double alpha) {
  double a = alpha - std::floor(alpha);
  if (a >= 1.0) a = 0.0;
  return a;
}

/// Wrap an angle into [-π, π).
inline double wrap_angle(double q) {
  double w = q - two_pi * std::floor((q + pi) / two_pi);
  if (w >= pi) w -= two_pi;
  if (w < -pi) w = -pi;
  return w;
}

class TwistedBasis {
public:
  TwistedBasis(double alpha, double hbar, int cutoff) : alpha_(reduce_twist(alpha)), hbar_(hbar), cutoff_(cutoff) {
    if (!std::isfinite(alpha)) throw DomainError("TwistedBasis: alpha must be finite");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("TwistedBasis: hbar must be positive");
    if (cutoff < 1) throw DomainError("TwistedBasis: cutoff must be a positive integer");
  }

  double alpha() const noexcept { return alpha_; }
  double hbar() const noexcept { return hbar_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(2 * cutoff_ + 1); }

  bool contains(int n) const noexcept { return n >= -cutoff_ && n <= cutoff_; }
  std::size_t slot(int n) const noexcept { return static_cast<std::size_t>(n + cutoff_); }
  int index(std::size_t slot) const noexcept { return static_cast<int>(slot) - cutoff_; }

  /// Lattice wavenumber n + α.
  double wavenumber(int n) const noexcept { return static_cast<double>(n) + alpha_; }

  bool same_space(const TwistedBasis& other) const noexcept {
    return alpha_ == other.alpha_ && hbar_ == other.hbar_ && cutoff_ == other.cutoff_;
  }

  /// Default half-width ceil(8·max(r/ħ, 1)) + m + 8.
  static int default_cutoff(double r_over_hbar, int potential_degree = 0) {
    return static_cast<int>(std::ceil(8.0 * std::max(r_over_hbar, 1.0))) + potential_degree + 8;
  }

private:
  double alpha_;
  double hbar_;
  int cutoff_;
};

/// p_{n,α} = ħ(n + α).
inline double momentum_eigenvalue(const TwistedBasis& basis, int n) {
  if (!basis.contains(n))
    throw DomainError("momentum_eigenvalue: n = " + std::to_string(n) + " outside [-N, N] with N = " +
                      std::to_string(basis.cutoff()));
  return basis.hbar() * (static_cast<double>(n) + basis.alpha());
}

class MomentumState {
public:
  explicit MomentumState(TwistedBasis basis) : basis_(basis), coeffs_(basis.dimension(), complex{}) {}
  MomentumState(TwistedBasis basis, std::vector<complex> coeffs) : basis_(basis), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_.dimension()) throw DomainError("MomentumState: coefficient count does not match basis");
  }

  static MomentumState basis_vector(const TwistedBasis& basis, int n) {
    MomentumState s(basis);
    s[n] = 1.0;
    return s;
  }

  const TwistedBasis& basis() const noexcept { return basis_; }
  const std::vector<complex>& coeffs() const noexcept { return coeffs_; }
  std::vector<complex>& coeffs() noexcept { return coeffs_; }

  /// Coefficient c_n, n ∈ [-N, N].
  complex& operator[](int n) { return coeffs_[basis_.slot(n)]; }
  const complex& operator[](int n) const { return coeffs_[basis_.slot(n)]; }

  complex at(int n) const {
    if (!basis_.contains(n)) throw DomainError("MomentumState::at: index out of range");
    return coeffs_[basis_.slot(n)];
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return s;
  }

  bool is_normalized(double tol = 1e-10) const { return std::abs(norm_squared() - 1.0) <= tol; }

  MomentumState normalized() const {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) throw DomainError("MomentumState::normalized: zero state");
    MomentumState out = *this;
    for (auto& c : out.coeffs_) c /= n;
    return out;
  }

  /// Value of the series Σ c_n e^{i(n+α)θ}/√(2π) at any θ.
  complex evaluate(double theta) const {
    complex sum{};
    for (std::size_t s = 0; s < coeffs_.size(); ++s)
      sum += coeffs_[s] * std::polar(1.0, basis_.wavenumber(basis_.index(s)) * theta);
    return sum / std::sqrt(two_pi);
  }

private:
  TwistedBasis basis_;
  std::vector<complex> coeffs_;
};

/// ⟨a|b⟩.
inline complex inner_product(const MomentumState& a, const MomentumState& b) {
  if (!a.basis().same_space(b.basis())) throw DomainError("inner_product: states live in different bases");
  complex s{};
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::conj(a.coeffs()[i]) * b.coeffs()[i];
  return s;
}

/// ‖a - b‖.
inline double distance(const MomentumState& a, const MomentumState& b) {
  if (!a.basis().same_space(b.basis())) throw DomainError("distance: states live in different bases");
  double s = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::norm(a.coeffs()[i] - b.coeffs()[i]);
  return std::sqrt(s);
}

struct PositionWavefunction {
  QuadratureGrid grid;
  std::vector<complex> values;

  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.weight();
  }
};

inline PositionWavefunction synthesize(const MomentumState& state, const QuadratureGrid& grid) {
  PositionWavefunction psi{grid, std::vector<complex>(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) psi.values[j] = state.evaluate(grid.node(j));
  return psi;
}

/// c_n = ∫ e^{-i(n+α)θ} ψ(θ) dθ / √(2π) by the trapezoidal rule. Exact for
/// band-limited ψ with 2N < M.
inline MomentumState analyze(const PositionWavefunction& psi, const TwistedBasis& basis) {
  const std::size_t m = psi.grid.size();
  if (m < 2 * static_cast<std::size_t>(basis.cutoff() + 1))
    throw ResolutionError("analyze: grid of " + std::to_string(m) + " nodes cannot resolve cutoff " +
                          std::to_string(basis.cutoff()) + " (need M >= 2(N+1))");
  if (psi.values.size() != m) throw DomainError("analyze: sample count does not match grid");
  MomentumState out(basis);
  const double scale = psi.grid.weight() / std::sqrt(two_pi);
  for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) {
    const double k = basis.wavenumber(n);
    complex sum{};
    for (std::size_t j = 0; j < m; ++j) sum += std::polar(1.0, -k * psi.grid.node(j)) * psi.values[j];
    out[n] = sum * scale;
  }
  return out;
}

/// |ψ(π) - e^{2πiα} ψ(-π)| for any callable wavefunction.
template <class F>
  requires std::invocable<F&, double>
double check_boundary_phase(F&& psi, double alpha) {
  const complex right = psi(pi);
  const complex left = psi(-pi);
  return std::abs(right - std::polar(1.0, two_pi * alpha) * left);
}

/// Boundary defect of a momentum-space state, evaluated from its series at ±π.
inline double check_boundary_phase(const MomentumState& state, double alpha) {
  return check_boundary_phase([&state](double theta) { return state.evaluate(theta); }, alpha);
}

struct ShiftResult {
  MomentumState state;
  double dropped_norm_squared = 0.0;  // weight pushed past the lattice edge
};

/// e^{ikQ}: |n,α⟩ → |n+k,α⟩, i.e. c'_n = c_{n-k}.
inline ShiftResult apply_shift(const MomentumState& state, int k) {
  const TwistedBasis& b = state.basis();
  ShiftResult out{MomentumState(b), 0.0};
  for (int n = -b.cutoff(); n <= b.cutoff(); ++n) {
    const int target = n + k;
    if (b.contains(target))
      out.state[target] = state[n];
    else
      out.dropped_norm_squared += std::norm(state[n]);
  }
  return out;
}

} // namespace eqcircle
