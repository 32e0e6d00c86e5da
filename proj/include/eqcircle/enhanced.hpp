#pragma once

/**
 * @file enhanced.hpp
 * @brief Enhanced classical Hamiltonian H_α(p,q) = ⟨p,q|𝓗|p,q⟩ for
 *        𝓗 = P_α² + V(Q),  V(Q) = a_0 + Σ_n [a_n cos nQ + b_n sin nQ].
 *
 * Conjugating by the boost and the rotation turns P_α into P_α + p and Q into
 * Q + q, so the diagonal elements reduce to fiducial moments:
 *
 *     H_α(p,q) = (p + ħα)² + var(P_α) + a_0 + Σ_n ρ_n [a_n cos nq + b_n sin nq],
 *
 * with ρ_n = I_n(2r/ħ)/I_0(2r/ħ). The canonical shift p → p - ħα removes the
 * twist from the kinetic term; 1 - ρ_n ≈ n²ħ/(4r) carries the
 * O(ħ/r) departure from the classical Hamiltonian p² + V(q).
 */

#include <cmath>
#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eqcircle/coherent.hpp"
#include "eqcircle/errors.hpp"
#include "eqcircle/fiducial.hpp"
#include "eqcircle/specfun.hpp"

namespace eqcircle {

/// Trigonometric potential a_0 + Σ_{n=1}^{m} [a_n cos nq + b_n sin nq].
class TrigPotential {
public:
  TrigPotential() = default;
  TrigPotential(double a0, std::vector<double> a, std::vector<double> b) : a0_(a0), a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() != b_.size()) throw DomainError("TrigPotential: cosine and sine coefficient lists differ in length");
    if (!std::isfinite(a0_)) throw DomainError("TrigPotential: a0 must be finite");
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (!std::isfinite(a_[i]) || !std::isfinite(b_[i])) throw DomainError("TrigPotential: coefficients must be finite");
  }

  static TrigPotential free() { return {}; }
  static TrigPotential pendulum(double amplitude) { return TrigPotential(0.0, {amplitude}, {0.0}); }

  /// Coefficients uniform in [-scale, scale].
  template <class Rng>
  static TrigPotential random(int degree, double scale, Rng& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> a(static_cast<std::size_t>(degree));
    std::vector<double> b(static_cast<std::size_t>(degree));
    const double a0 = u(rng);
    for (int i = 0; i < degree; ++i) {
      a[static_cast<std::size_t>(i)] = u(rng);
      b[static_cast<std::size_t>(i)] = u(rng);
    }
    return TrigPotential(a0, std::move(a), std::move(b));
  }

  int degree() const noexcept { return static_cast<int>(a_.size()); }
  double a0() const noexcept { return a0_; }
  double a(int n) const { return a_.at(static_cast<std::size_t>(n - 1)); }
  double b(int n) const { return b_.at(static_cast<std::size_t>(n - 1)); }
  const std::vector<double>& cos_coefficients() const noexcept { return a_; }
  const std::vector<double>& sin_coefficients() const noexcept { return b_; }

  /// Σ_n n² (|a_n| + |b_n|): bound on |V''|.
  double curvature_scale() const {
    double s = 0.0;
    for (int n = 1; n <= degree(); ++n) s += double(n) * n * (std::abs(a(n)) + std::abs(b(n)));
    return s;
  }

  /// Σ_n (|a_n| + |b_n|).
  double coefficient_sum() const {
    double s = 0.0;
    for (int n = 1; n <= degree(); ++n) s += std::abs(a(n)) + std::abs(b(n));
    return s;
  }

  /// V(q) with harmonic n multiplied by weights[n-1] (empty: all ones).
  double value(double q, const std::vector<double>& weights = {}) const {
    double v = a0_;
    for (int n = 1; n <= degree(); ++n) {
      const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(n - 1)];
      v += w * (a(n) * std::cos(n * q) + b(n) * std::sin(n * q));
    }
    return v;
  }

  /// dV/dq, same weighting.
  double derivative(double q, const std::vector<double>& weights = {}) const {
    double d = 0.0;
    for (int n = 1; n <= degree(); ++n) {
      const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(n - 1)];
      d += w * n * (b(n) * std::cos(n * q) - a(n) * std::sin(n * q));
    }
    return d;
  }

private:
  double a0_ = 0.0;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// var(P_α) from the lattice sum Σ ħ²(n+α)² c_n² - (Σ ħ(n+α) c_n²)².
inline double lattice_momentum_variance(const FiducialSpec& spec) {
  return moments(spec, 0).var_p;
}

inline double canonical_shift(double p, const FiducialSpec& spec) { return p - spec.hbar() * spec.alpha(); }

/// Integrand ħα q̇ of the total-derivative term.
inline double surface_term(double alpha, double hbar, double qdot) { return hbar * alpha * qdot; }

/// ∫ ħα q̇ dt along a path with unwrapped endpoints.
inline double surface_integral(double alpha, double hbar, double q_unwrapped_start, double q_unwrapped_end) {
  return hbar * alpha * (q_unwrapped_end - q_unwrapped_start);
}

inline double classical_hamiltonian(const TrigPotential& V, double p, double q) { return p * p + V.value(q); }

class EnhancedHamiltonian {
public:
  /// Largest tolerated |⟨sin nQ⟩| from quadrature.
  static constexpr double sine_guard = 1e-12;

  EnhancedHamiltonian(TrigPotential potential, const FiducialSpec& spec)
      : potential_(std::move(potential)), spec_(spec), kinetic_offset_(lattice_momentum_variance(spec)) {
    attenuation_.resize(static_cast<std::size_t>(potential_.degree()));
    for (int n = 1; n <= potential_.degree(); ++n) {
      attenuation_[static_cast<std::size_t>(n - 1)] = attenuation(spec, n);
      const double s = sine_moment_quadrature(spec, n);
      if (std::abs(s) > sine_guard)
        throw ContractViolation("EnhancedHamiltonian: <sin " + std::to_string(n) + "Q> = " + std::to_string(s) + " is not zero");
    }
  }

  const TrigPotential& potential() const noexcept { return potential_; }
  const FiducialSpec& spec() const noexcept { return spec_; }
  double kinetic_offset() const noexcept { return kinetic_offset_; }
  const std::vector<double>& attenuation_factors() const noexcept { return attenuation_; }
  double twist_momentum() const noexcept { return spec_.hbar() * spec_.alpha(); }

  /// ⟨(P_α + p)²⟩ = (p + ħα)² + var(P_α).
  double kinetic(double p) const {
    const double k = p + twist_momentum();
    return k * k + kinetic_offset_;
  }

  /// ⟨V(Q + q)⟩ = a_0 + Σ ρ_n [a_n cos nq + b_n sin nq].
  double effective_potential(double q) const { return potential_.value(q, attenuation_); }
  double effective_potential_derivative(double q) const { return potential_.derivative(q, attenuation_); }

  /// H_α(p, q) on the unshifted label p.
  double operator()(double p, double q) const { return kinetic(p) + effective_potential(q); }

  /// H_α(p - ħα, q) = p² + var(P_α) + ⟨V(Q+q)⟩.
  double shifted(double p, double q) const { return (*this)(canonical_shift(p, spec_), q); }

  /// (∂H/∂p, -∂H/∂q) at (p, q).
  std::pair<double, double> vector_field(double p, double q) const {
    return {2.0 * (p + twist_momentum()), -effective_potential_derivative(q)};
  }

  double max_attenuation_loss() const {
    double m = 0.0;
    for (double r : attenuation_) m = std::max(m, 1.0 - r);
    return m;
  }

private:
  TrigPotential potential_;
  FiducialSpec spec_;
  double kinetic_offset_;
  std::vector<double> attenuation_;
};

inline double enhanced_hamiltonian(const EnhancedHamiltonian& H, double p, double q) { return H(p, q); }

/// ⟨p,q|𝓗|p,q⟩ by position-space quadrature of the quadratic form
///     ħ² ∫ |∂_θ(e^{ipθ/ħ} η_α)|² dθ + ∫ |η_α(θ)|² V(θ + q) dθ,
/// with the derivative taken by an eighth-order central difference of the
/// fiducial formula and the norm taken from the same grid. Independent of the
/// Bessel closed forms.
inline double hamiltonian_expectation_quadrature(const TrigPotential& V, const FiducialSpec& spec, const CoherentLabel& label,
                                                 const QuadratureGrid& grid = QuadratureGrid(1024)) {
  const double hbar = spec.hbar();
  const double boost = label.p / hbar;
  const auto psi = [&](double t) { return std::polar(1.0, boost * t) * evaluate(spec, t); };
  const double h = 0.05 / (std::sqrt(1.0 + spec.r_over_hbar()) + std::abs(boost) + 1.0);
  static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const auto derivative = [&](double t) {
    complex d{};
    for (int k = 1; k <= 4; ++k) d += c[k - 1] * (psi(t + k * h) - psi(t - k * h));
    return d / h;
  };
  const double kinetic = integrate_periodic([&](double t) { return std::norm(derivative(t)); }, grid);
  const double potential = integrate_periodic([&](double t) { return std::norm(psi(t)) * V.value(t + label.q); }, grid);
  const double norm = integrate_periodic([&](double t) { return std::norm(psi(t)); }, grid);
  return (hbar * hbar * kinetic + potential) / norm;
}

} // namespace eqcircle
