#pragma once

/**
 * @file fiducial.hpp
 * @brief The Bessel-normalized fiducial state on the circle.
 *
 *     η_α(θ) = N exp((r/ħ)(cos θ - 1) + iαθ),
 *     N      = [2π e^{-2r/ħ} I_0(2r/ħ)]^{-1/2}.
 *
 * Its momentum coefficients in the twisted basis are
 *
 *     c_n = √(2π) N e^{-r/ħ} I_n(r/ħ),
 *
 * real, positive and even in n, and its density moments are
 * ⟨cos nQ⟩ = I_n(2r/ħ)/I_0(2r/ħ), ⟨sin nQ⟩ = 0. Every closed form here has a
 * quadrature counterpart; the closed form is what the rest of the library
 * consumes.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "eqcircle/errors.hpp"
#include "eqcircle/hilbert.hpp"
#include "eqcircle/specfun.hpp"

namespace eqcircle {

/// Parameters (r, α, ħ) of the fiducial vector. r = 0 is the uniform state.
class FiducialSpec {
public:
  FiducialSpec(double r, double alpha, double hbar) : r_(r), alpha_(reduce_twist(alpha)), hbar_(hbar) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("FiducialSpec: r must be finite and nonnegative");
    if (!std::isfinite(alpha)) throw DomainError("FiducialSpec: alpha must be finite");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("FiducialSpec: hbar must be positive");
  }

  double r() const noexcept { return r_; }
  double alpha() const noexcept { return alpha_; }
  double hbar() const noexcept { return hbar_; }
  double r_over_hbar() const noexcept { return r_ / hbar_; }

  /// Twisted basis with the default cutoff for this spec.
  TwistedBasis default_basis(int potential_degree = 0) const {
    return TwistedBasis(alpha_, hbar_, TwistedBasis::default_cutoff(r_over_hbar(), potential_degree));
  }

  bool compatible_with(const TwistedBasis& basis) const noexcept {
    return basis.alpha() == alpha_ && basis.hbar() == hbar_;
  }

private:
  double r_;
  double alpha_;
  double hbar_;
};

/// N = [2π e^{-2r/ħ} I_0(2r/ħ)]^{-1/2}, with the bracket taken from the
/// scaled Bessel path.
inline double normalization(const FiducialSpec& spec) {
  return 1.0 / std::sqrt(two_pi * bessel_i_scaled(0, 2.0 * spec.r_over_hbar()));
}

/// η_α(θ). The formula is evaluated as written for any real θ, so it doubles
/// as the smooth extension past ±π.
inline complex evaluate(const FiducialSpec& spec, double theta) {
  const double envelope = normalization(spec) * std::exp(spec.r_over_hbar() * (std::cos(theta) - 1.0));
  return std::polar(envelope, spec.alpha() * theta);
}

/// |η(θ)|² without the normalization call per sample.
class FiducialDensity {
public:
  explicit FiducialDensity(const FiducialSpec& spec)
      : z_(spec.r_over_hbar()), norm_sq_(normalization(spec) * normalization(spec)) {}
  double operator()(double theta) const { return norm_sq_ * std::exp(2.0 * z_ * (std::cos(theta) - 1.0)); }

private:
  double z_;
  double norm_sq_;
};

/// Closed-form momentum coefficients c_n = e^{-z}I_n(z) / √(e^{-2z}I_0(2z)),
/// z = r/ħ.
inline MomentumState momentum_coefficients(const FiducialSpec& spec, const TwistedBasis& basis) {
  if (!spec.compatible_with(basis))
    throw DomainError("momentum_coefficients: basis alpha/hbar do not match the fiducial spec");
  const double z = spec.r_over_hbar();
  const auto scaled = bessel_i_scaled_sequence(basis.cutoff(), z);
  const double denom = std::sqrt(bessel_i_scaled(0, 2.0 * z));
  MomentumState out(basis);
  for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n)
    out[n] = scaled[static_cast<std::size_t>(std::abs(n))] / denom;
  return out;
}

/// ρ_n = ⟨cos nQ⟩ = I_n(2r/ħ)/I_0(2r/ħ); ρ_n = δ_{n0} for r = 0.
inline double attenuation(const FiducialSpec& spec, int n) {
  if (n < 0) n = -n;
  if (spec.r() == 0.0) return n == 0 ? 1.0 : 0.0;
  return bessel_i_ratio(n, 2.0 * spec.r_over_hbar());
}

/// ⟨cos nQ⟩ by trapezoidal quadrature of |η|².
inline double attenuation_quadrature(const FiducialSpec& spec, int n, const QuadratureGrid& grid = QuadratureGrid()) {
  const FiducialDensity density(spec);
  return integrate_periodic([&](double t) { return density(t) * std::cos(n * t); }, grid);
}

/// ⟨sin nQ⟩ by trapezoidal quadrature; zero by evenness of |η|².
inline double sine_moment_quadrature(const FiducialSpec& spec, int n, const QuadratureGrid& grid = QuadratureGrid()) {
  const FiducialDensity density(spec);
  return integrate_periodic([&](double t) { return density(t) * std::sin(n * t); }, grid);
}

/// var(P_α) = ħ r ρ_1 / 2, from the Bessel identity I_0 - I_2 = (2/z) I_1.
inline double momentum_variance_closed_form(const FiducialSpec& spec) {
  if (spec.r() == 0.0) return 0.0;
  return 0.5 * spec.hbar() * spec.r() * bessel_i_ratio(1, 2.0 * spec.r_over_hbar());
}

// Gauss–Legendre rule on [-π, π] with panels narrow enough for the peak.
inline QuadratureRule fiducial_interval_rule(const FiducialSpec& spec) {
  const auto panels = static_cast<std::size_t>(std::max(8.0, std::ceil(4.0 * std::sqrt(spec.r_over_hbar()))));
  return composite_gauss_legendre(-pi, pi, panels, 32);
}

struct FiducialMoments {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
  std::vector<double> cos_moments;  // ρ_0..ρ_m
  double norm_squared = 0.0;  // Σ c_n² over the lattice used
  double cross_check_defect = 0.0;  // max |closed form - quadrature| over ρ_n and var_p
};

/// Moments of |η_α|². Momentum moments come from the lattice sums over the
/// default basis.
inline FiducialMoments moments(const FiducialSpec& spec, int max_harmonic, const QuadratureGrid& grid = QuadratureGrid()) {
  if (max_harmonic < 0) throw DomainError("moments: max_harmonic must be nonnegative");
  FiducialMoments m;
  const FiducialDensity density(spec);
  m.mean_q = fiducial_interval_rule(spec).integrate([&](double t) { return t * density(t); });

  const TwistedBasis basis = spec.default_basis();
  const MomentumState c = momentum_coefficients(spec, basis);
  double first = 0.0;
  double second = 0.0;
  for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) {
    const double w = std::norm(c[n]);
    const double p = momentum_eigenvalue(basis, n);
    m.norm_squared += w;
    first += p * w;
    second += p * p * w;
  }
  m.mean_p = first;
  m.var_p = std::max(0.0, second - first * first);

  m.cos_moments.resize(static_cast<std::size_t>(max_harmonic) + 1);
  for (int n = 0; n <= max_harmonic; ++n) {
    m.cos_moments[static_cast<std::size_t>(n)] = attenuation(spec, n);
    m.cross_check_defect = std::max(m.cross_check_defect,
                                    std::abs(m.cos_moments[static_cast<std::size_t>(n)] - attenuation_quadrature(spec, n, grid)));
  }
  m.cross_check_defect = std::max(m.cross_check_defect, std::abs(m.var_p - momentum_variance_closed_form(spec)));
  return m;
}

struct GaussianBoundResult {
  bool holds = true;
  double K = 1.0;  // e^{(r/ħ)(π² - 4)}
  std::optional<double> violating_theta;
  bool upper_violated = false;
  bool lower_violated = false;
};

/// Constant of the upper envelope: max over [-π, π] of (r/ħ)(2cos θ - 2 + θ²)
/// sits at θ = ±π.
inline double envelope_constant(const FiducialSpec& spec) {
  return std::exp(spec.r_over_hbar() * (pi * pi - 4.0));
}

inline double upper_envelope(const FiducialSpec& spec, double theta) {
  const double n = normalization(spec);
  return envelope_constant(spec) * n * n * std::exp(-spec.r_over_hbar() * theta * theta);
}

inline double lower_envelope(const FiducialSpec& spec, double theta) {
  const double n = normalization(spec);
  return n * n * std::exp(-spec.r_over_hbar() * theta * theta);
}

/// Checks N² e^{-(r/ħ)θ²} ≤ |η(θ)|² ≤ K N² e^{-(r/ħ)θ²} at `samples` uniform
/// points of [-π, π).
inline GaussianBoundResult gaussian_bound_check(const FiducialSpec& spec, int samples) {
  if (!(spec.r() > 0.0)) throw DomainError("gaussian_bound_check: requires r > 0");
  if (samples < 1) throw DomainError("gaussian_bound_check: need at least one sample");
  constexpr double slack = 1e-12;  // relative, rounding only
  GaussianBoundResult out;
  out.K = envelope_constant(spec);
  for (int j = 0; j < samples; ++j) {
    const double theta = -pi + two_pi * j / samples;
    const double value = std::norm(evaluate(spec, theta));
    const double upper = upper_envelope(spec, theta);
    const double lower = lower_envelope(spec, theta);
    const bool up_bad = value > upper * (1.0 + slack);
    const bool low_bad = value < lower * (1.0 - slack);
    if (up_bad || low_bad) {
      out.holds = false;
      out.upper_violated = up_bad;
      out.lower_violated = low_bad;
      out.violating_theta = theta;
      return out;
    }
  }
  return out;
}

/// Positive θ at which |η(θ)|² drops to `level`·|η(0)|², found by bisection on
/// the profile itself. Returns π when the profile never gets that low.
inline double profile_half_width(const FiducialSpec& spec, double level) {
  const auto ratio = [&](double t) { return std::norm(evaluate(spec, t)) / std::norm(evaluate(spec, 0.0)); };
  if (ratio(pi) >= level) return pi;
  double lo = 0.0;
  double hi = pi;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace eqcircle
