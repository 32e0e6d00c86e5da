#pragma once

/**
 * @file coherent.hpp
 * @brief Circle coherent states |p,q⟩ = e^{-iqP_α/ħ} e^{ipQ/ħ} |η_α⟩.
 *
 * The boost multiplies η_α(θ) by e^{ipθ/ħ} on [-π, π); the rotation then
 * multiplies slot n by e^{-i(n+α)q}. The boosted profile is
 *
 *     d_n(p, 0) = (1/√(2π)) ∫ e^{-i(n+α)θ} e^{ipθ/ħ} η_α(θ) dθ
 *               = √(2π) N Σ_k e^{-z} I_k(z) sinc(p/ħ - n + k),   z = r/ħ,
 *
 * obtained by expanding e^{z cos θ} in its Fourier–Bessel series and
 * integrating term by term. For integer p/ħ the sum collapses to one term
 * and the boost is an exact lattice shift. For other p the boosted function
 * jumps at ±π by O(e^{-2z}), which shows up as 1/n tails in d_n.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "eqcircle/errors.hpp"
#include "eqcircle/fiducial.hpp"
#include "eqcircle/hilbert.hpp"
#include "eqcircle/specfun.hpp"

namespace eqcircle {

/// Phase-space label (p, q) ∈ ℝ × [-π, π).
struct CoherentLabel {
  double p = 0.0;
  double q = 0.0;

  CoherentLabel() = default;
  CoherentLabel(double p_, double q_) : p(p_), q(wrap_angle(q_)) {}
};

/// Coherent-state coefficients for one (fiducial, basis) pair. Holds the
/// scaled Bessel table; evaluation is const and thread-safe.
class CoherentFamily {
public:
  /// Largest accepted weight in the two outermost lattice slots.
  static constexpr double edge_tolerance = 1e-8;

  CoherentFamily(const FiducialSpec& spec, const TwistedBasis& basis) : spec_(spec), basis_(basis) {
    if (!spec.compatible_with(basis)) throw DomainError("CoherentFamily: basis alpha/hbar do not match the fiducial spec");
    const double z = spec.r_over_hbar();
    terms_ = static_cast<int>(std::ceil(9.5 * std::sqrt(z))) + 20;
    bessel_ = bessel_i_scaled_sequence(terms_, z);
    prefactor_ = std::sqrt(two_pi) * normalization(spec);
  }

  const FiducialSpec& spec() const noexcept { return spec_; }
  const TwistedBasis& basis() const noexcept { return basis_; }

  /// Boosted profile as a function of ν = p/ħ - n: d_n(p, 0).
  double profile(double nu) const {
    const double nearest = std::nearbyint(nu);
    if (nu == nearest) {
      const double k = std::abs(nearest);
      return k <= terms_ ? prefactor_ * bessel_[static_cast<std::size_t>(k)] : 0.0;
    }
    double sum = bessel_[0] * sinc(nu);
    for (int k = 1; k <= terms_; ++k) sum += bessel_[static_cast<std::size_t>(k)] * (sinc(nu + k) + sinc(nu - k));
    return prefactor_ * sum;
  }

  /// d_n(p, q) for one lattice slot. No truncation check.
  complex coefficient(int n, const CoherentLabel& label) const {
    const double nu = label.p / basis_.hbar() - static_cast<double>(n);
    return std::polar(1.0, -basis_.wavenumber(n) * label.q) * profile(nu);
  }

  /// All coefficients d_n(p, q), n ∈ [-N, N], without the truncation check.
  MomentumState coefficients(const CoherentLabel& label) const {
    MomentumState out(basis_);
    for (int n = -basis_.cutoff(); n <= basis_.cutoff(); ++n) out[n] = coefficient(n, label);
    return out;
  }

  /// Weight in the two outermost slots on each side.
  static double edge_weight(const MomentumState& s) {
    const int N = s.basis().cutoff();
    double w = std::norm(s[N]) + std::norm(s[-N]);
    if (N >= 2) w += std::norm(s[N - 1]) + std::norm(s[-N + 1]);
    return w;
  }

  /// |p,q⟩ in the truncated basis. Throws ResolutionError when the boosted state
  /// puts more than edge_tolerance of its weight on the lattice edge, or when
  /// the profile centre p/ħ lies off the lattice altogether.
  MomentumState state(const CoherentLabel& label) const {
    MomentumState out = coefficients(label);
    const double edge = edge_weight(out);
    if (edge > edge_tolerance || std::abs(label.p / basis_.hbar()) > basis_.cutoff())
      throw ResolutionError("coherent_state: cutoff " + std::to_string(basis_.cutoff()) +
                            " too small for p = " + std::to_string(label.p) + " (edge weight " + std::to_string(edge) + ")");
    return out;
  }

private:
  FiducialSpec spec_;
  TwistedBasis basis_;
  int terms_ = 0;
  std::vector<double> bessel_;
  double prefactor_ = 0.0;
};

inline MomentumState coherent_state(const CoherentLabel& label, const FiducialSpec& spec, const TwistedBasis& basis) {
  return CoherentFamily(spec, basis).state(label);
}

/// d_n(p, q) by direct Gauss–Legendre quadrature of the defining integral, as
/// an independent check of the series path.
inline complex coherent_coefficient_quadrature(int n, const CoherentLabel& label, const FiducialSpec& spec,
                                               const TwistedBasis& basis, std::size_t panels = 32) {
  const QuadratureRule rule = composite_gauss_legendre(-pi, pi, panels, 32);
  const double k = basis.wavenumber(n);
  const double boost = label.p / basis.hbar();
  const complex integral = rule.integrate([&](double t) {
    return std::polar(1.0, (boost - k) * t) * evaluate(spec, t);
  });
  return std::polar(1.0, -k * label.q) * integral / std::sqrt(two_pi);
}

/// ⟨a|b⟩ for two coherent states of the same family.
inline complex overlap(const CoherentLabel& a, const CoherentLabel& b, const CoherentFamily& family) {
  return inner_product(family.state(a), family.state(b));
}

inline complex overlap(const CoherentLabel& a, const CoherentLabel& b, const FiducialSpec& spec, const TwistedBasis& basis) {
  return overlap(a, b, CoherentFamily(spec, basis));
}

enum class UnityMode {
  analytic_q,  // q-integral done exactly; 1-D p quadrature
  full_2d,     // trapezoid in q times Gauss–Legendre in p, full matrix
};

struct UnityReport {
  double p_cutoff = 0.0;
  std::size_t p_nodes = 0;
  std::size_t q_nodes = 0;  // zero in analytic_q mode
  double diag_defect = 0.0;  // max_n |M_nn - 1|
  double interior_defect = 0.0;  // same, restricted to |n| ≤ interior_radius
  double offdiag_defect = 0.0;  // max_{m≠n} |M_mn|
  int interior_radius = 0;
  std::vector<double> diagonal;  // M_nn, n = -N..N
};

/// Gauss–Legendre rule on [-P, P] with at least `p_nodes` nodes and one
/// 16-point panel per unit of p/ħ.
inline QuadratureRule unity_p_rule(double p_cutoff, std::size_t p_nodes, double hbar) {
  const auto by_nodes = static_cast<std::size_t>(std::ceil(static_cast<double>(p_nodes) / 16.0));
  const auto by_width = static_cast<std::size_t>(std::ceil(2.0 * p_cutoff / hbar));
  return composite_gauss_legendre(-p_cutoff, p_cutoff, std::max(by_nodes, by_width), 16);
}

/// Truncated resolution of unity
///     M_mn = ∫_{-P}^{P} ∫_{-π}^{π} d_m(p,q) conj(d_n(p,q)) dq dp / (2πħ)
/// compared against the identity.
inline UnityReport verify_unity(const FiducialSpec& spec, const TwistedBasis& basis, double p_cutoff, std::size_t p_nodes,
                                UnityMode mode = UnityMode::analytic_q) {
  if (!(p_cutoff > 0.0)) throw DomainError("verify_unity: p_cutoff must be positive");
  if (p_nodes < 64) throw DomainError("verify_unity: p_nodes must be at least 64");
  const CoherentFamily family(spec, basis);
  const QuadratureRule rule = unity_p_rule(p_cutoff, p_nodes, basis.hbar());
  const int N = basis.cutoff();
  const std::size_t dim = basis.dimension();
  const double hbar = basis.hbar();

  UnityReport report;
  report.p_cutoff = p_cutoff;
  report.p_nodes = rule.size();
  report.interior_radius = std::min(N, static_cast<int>(std::floor(spec.r_over_hbar())));
  report.diagonal.assign(dim, 0.0);

  // d_n(p_j, 0), cached; the q dependence is the phase e^{-i(n+α)q}.
  std::vector<double> profiles(rule.size() * dim);
  for (std::size_t j = 0; j < rule.size(); ++j)
    for (int n = -N; n <= N; ++n) profiles[j * dim + basis.slot(n)] = family.profile(rule.nodes[j] / hbar - n);

  if (mode == UnityMode::analytic_q) {
    // ∫ e^{-i(m-n)q} dq = 2π δ_mn leaves (1/ħ) ∫ |d_n(p,0)|² dp on the
    // diagonal and exact zeros elsewhere.
    for (std::size_t j = 0; j < rule.size(); ++j)
      for (std::size_t s = 0; s < dim; ++s) {
        const double f = profiles[j * dim + s];
        report.diagonal[s] += rule.weights[j] * f * f / hbar;
      }
    report.offdiag_defect = 0.0;
  } else {
    const QuadratureGrid qgrid(std::max<std::size_t>(16, 2 * dim + 2));
    report.q_nodes = qgrid.size();
    std::vector<complex> matrix(dim * dim, complex{});
    std::vector<complex> phase(qgrid.size() * dim);
    for (std::size_t l = 0; l < qgrid.size(); ++l)
      for (int n = -N; n <= N; ++n) phase[l * dim + basis.slot(n)] = std::polar(1.0, -basis.wavenumber(n) * qgrid.node(l));
    std::vector<complex> d(dim);
    const double scale = qgrid.weight() / (two_pi * hbar);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double w = rule.weights[j] * scale;
      for (std::size_t l = 0; l < qgrid.size(); ++l) {
        for (std::size_t s = 0; s < dim; ++s) d[s] = phase[l * dim + s] * profiles[j * dim + s];
        for (std::size_t a = 0; a < dim; ++a) {
          const complex da = w * d[a];
          complex* row = &matrix[a * dim];
          for (std::size_t b = 0; b < dim; ++b) row[b] += da * std::conj(d[b]);
        }
      }
    }
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) {
        if (a == b)
          report.diagonal[a] = matrix[a * dim + a].real();
        else
          report.offdiag_defect = std::max(report.offdiag_defect, std::abs(matrix[a * dim + b]));
      }
  }

  for (int n = -N; n <= N; ++n) {
    const double defect = std::abs(report.diagonal[basis.slot(n)] - 1.0);
    report.diag_defect = std::max(report.diag_defect, defect);
    if (std::abs(n) <= report.interior_radius) report.interior_defect = std::max(report.interior_defect, defect);
  }
  return report;
}

} // namespace eqcircle
