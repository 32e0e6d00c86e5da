#pragma once

/**
 * @file specfun.hpp
 * @brief Modified Bessel functions of integer order and quadrature rules.
 *
 * Bessel functions I_n(z) are evaluated by their power series for small
 * arguments and by Miller's backward recurrence, normalized with
 *
 *     I_0(z) + 2 Σ_{k≥1} I_k(z) = e^z,
 *
 * for large arguments. The recurrence path yields e^{-z} I_n(z) directly, so
 * nothing overflows for the arguments 2r/ħ reached in classical-limit runs.
 *
 * Periodic integrands on [-π, π) are integrated with the trapezoidal rule,
 * which converges geometrically for analytic periodic functions and is exact
 * for trigonometric polynomials of degree below M/2. Non-periodic integrands
 * (boosted states, odd moments) go through composite Gauss–Legendre.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "eqcircle/errors.hpp"

namespace eqcircle {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace detail {

// Arguments below this use the power series.
inline constexpr double series_threshold = 15.0;

inline double scaled_series(int order, double z) {
  if (z == 0.0) return order == 0 ? 1.0 : 0.0;
  const double half = 0.5 * z;
  const double quarter_sq = half * half;
  // First term (z/2)^n / n!, times e^{-z}, formed in the log domain.
  double term = std::exp(order * std::log(half) - std::lgamma(order + 1.0) - z);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= quarter_sq / (static_cast<double>(k) * (k + order));
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return sum;
}

// Start index for the backward recurrence: past the requested order and past
// the ~9√z band holding the normalization mass.
inline int miller_start(int max_order, double z) {
  const double extra = 10.0 * std::sqrt(z) + std::sqrt(40.0 * (max_order + 1)) + 30.0;
  return max_order + static_cast<int>(std::ceil(extra));
}

// Unnormalized backward recurrence. Returns y_0..y_kmax proportional to I_k(z)
// and, through `mass`, y_0 + 2 Σ_{k≥1} y_k with the same scale.
inline std::vector<double> miller_raw(int kmax, double z, double& mass) {
  constexpr double big = 1e250;
  constexpr double shrink = 1e-250;
  const int start = miller_start(kmax, z);
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
  double upper = 0.0;  // y_{k+1}
  double current = 1.0;  // y_k
  double sum = 0.0;
  for (int k = start; k >= 1; --k) {
    const double lower = (2.0 * k / z) * current + upper;
    if (k <= kmax) out[static_cast<std::size_t>(k)] = current;
    sum += 2.0 * current;
    upper = current;
    current = lower;
    if (current > big) {
      current *= shrink;
      upper *= shrink;
      sum *= shrink;
      for (int j = k; j <= kmax; ++j) out[static_cast<std::size_t>(j)] *= shrink;
    }
  }
  out[0] = current;
  mass = sum + current;
  return out;
}

} // namespace detail

/// e^{-z} I_k(z) for k = 0..kmax. Never overflows; entries below the smallest
/// representable double flush to zero.
inline std::vector<double> bessel_i_scaled_sequence(int kmax, double z) {
  if (kmax < 0) throw DomainError("bessel_i_scaled_sequence: kmax must be nonnegative");
  if (!(z >= 0.0) || !std::isfinite(z))
    throw DomainError("bessel_i_scaled_sequence: z must be finite and nonnegative, got " + std::to_string(z));
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (z < detail::series_threshold) {
    for (int k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = detail::scaled_series(k, z);
    return out;
  }
  double mass = 0.0;
  out = detail::miller_raw(kmax, z, mass);
  for (auto& v : out) v /= mass;
  return out;
}

/// Exponentially scaled modified Bessel function e^{-z} I_n(z).
inline double bessel_i_scaled(int order, double z) {
  if (order < 0) throw DomainError("bessel_i_scaled: order must be nonnegative");
  if (!(z >= 0.0) || !std::isfinite(z))
    throw DomainError("bessel_i_scaled: z must be finite and nonnegative, got " + std::to_string(z));
  if (z < detail::series_threshold) return detail::scaled_series(order, z);
  return bessel_i_scaled_sequence(order, z).back();
}

/// Modified Bessel function of the first kind I_n(z), n ≥ 0, z ≥ 0.
/// Throws DomainError when the unscaled value overflows (z ≳ 713); use
/// bessel_i_scaled there.
inline double bessel_i(int order, double z) {
  const double scaled = bessel_i_scaled(order, z);
  if (z < detail::series_threshold) return scaled * std::exp(z);
  const double value = scaled * std::exp(z);
  if (!std::isfinite(value))
    throw DomainError("bessel_i: I_n(z) overflows for z = " + std::to_string(z) + "; use bessel_i_scaled");
  return value;
}

/// I_n(z) / I_0(z) by backward recurrence, without forming either factor.
/// The result lies in [0, 1].
inline double bessel_i_ratio(int order, double z) {
  if (order < 0) throw DomainError("bessel_i_ratio: order must be nonnegative");
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError("bessel_i_ratio: z must be finite and positive, got " + std::to_string(z));
  if (order == 0) return 1.0;
  double mass = 0.0;
  const auto y = detail::miller_raw(order, z, mass);
  return y.back() / y.front();
}

/// sin(πx), exact zero at integers.
inline double sin_pi(double x) {
  const double n = std::nearbyint(x);
  const double frac = x - n;
  const double s = std::sin(pi * frac);
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

/// Normalized sinc, sin(πx)/(πx).
inline double sinc(double x) {
  if (std::abs(x) < 1e-8) {
    const double px = pi * x;
    return 1.0 - px * px / 6.0;
  }
  return sin_pi(x) / (pi * x);
}

/// Uniform grid θ_j = -π + 2πj/M on the circle.
class QuadratureGrid {
public:
  static constexpr std::size_t default_nodes = 512;

  explicit QuadratureGrid(std::size_t node_count = default_nodes) : count_(node_count) {
    if (count_ < 16 || count_ % 2 != 0)
      throw DomainError("QuadratureGrid: node count must be even and >= 16, got " + std::to_string(count_));
  }

  std::size_t size() const noexcept { return count_; }
  double weight() const noexcept { return two_pi / static_cast<double>(count_); }
  double node(std::size_t j) const noexcept { return -pi + two_pi * static_cast<double>(j) / static_cast<double>(count_); }

  std::vector<double> nodes() const {
    std::vector<double> out(count_);
    for (std::size_t j = 0; j < count_; ++j) out[j] = node(j);
    return out;
  }

  QuadratureGrid refined() const { return QuadratureGrid(2 * count_); }

private:
  std::size_t count_;
};

/// Trapezoidal sum weight · Σ_j f(θ_j). Spectrally accurate for smooth
/// periodic f; for f with a jump at ±π the error is bounded by the jump.
template <class F>
auto integrate_periodic(F&& f, const QuadratureGrid& grid) {
  using R = std::decay_t<std::invoke_result_t<F&, double>>;
  R sum{};
  for (std::size_t j = 0; j < grid.size(); ++j) sum += f(grid.node(j));
  return sum * grid.weight();
}

/// Nodes and weights of a quadrature rule on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  auto integrate(F&& f) const {
    using R = std::decay_t<std::invoke_result_t<F&, double>>;
    R sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// n-point Gauss–Legendre rule on [-1, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 2.0);
  if (n == 1) return rule;
  // P_n(x) and P_n'(x) by the three-term recurrence.
  const auto legendre = [n](double x, double& derivative) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    derivative = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Composite Gauss–Legendre: `panels` equal sub-intervals of [a, b], each
/// carrying an `order`-point rule.
inline QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order = 16) {
  if (!(b > a)) throw DomainError("composite_gauss_legendre: need b > a");
  if (panels == 0) throw DomainError("composite_gauss_legendre: need at least one panel");
  const QuadratureRule base = gauss_legendre(order);
  QuadratureRule rule;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double mid = lo + 0.5 * width;
    for (std::size_t i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

} // namespace eqcircle
