#pragma once

// Leapfrog (kick-drift-kick Störmer–Verlet) integration of the separable
// Hamiltonians on the cylinder S¹ × ℝ:
//
//   enhanced:  H = (p + ħα)² + var(P_α) + a_0 + Σ ρ_n [a_n cos nq + b_n sin nq]
//   classical: H = p² + a_0 + Σ [a_n cos nq + b_n sin nq]
//
// The angle is carried unwrapped; wrapping happens only when a PhasePoint is
// formed, so winding numbers survive for the surface-term bookkeeping.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eqcircle/enhanced.hpp"
#include "eqcircle/errors.hpp"
#include "eqcircle/hilbert.hpp"

namespace eqcircle {

enum class HamiltonianKind { classical, enhanced };

inline const char* to_string(HamiltonianKind kind) { return kind == HamiltonianKind::classical ? "classical" : "enhanced"; }

struct PhasePoint {
  double q = 0.0;  // wrapped to [-π, π)
  double q_unwrapped = 0.0;
  double p = 0.0;

  static PhasePoint at(double q_unwrapped, double p) { return PhasePoint{wrap_angle(q_unwrapped), q_unwrapped, p}; }
};

struct Trajectory {
  HamiltonianKind kind = HamiltonianKind::classical;
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<double> energies;
  double dt = 0.0;
  int order = 2;

  std::size_t size() const noexcept { return points.size(); }
  const PhasePoint& front() const { return points.front(); }
  const PhasePoint& back() const { return points.back(); }

  /// max_t |E(t) - E(0)|.
  double energy_excursion() const {
    double m = 0.0;
    for (double e : energies) m = std::max(m, std::abs(e - energies.front()));
    return m;
  }

  long winding_number() const { return std::lround((back().q_unwrapped - front().q_unwrapped) / two_pi); }
};

/// The separable splitting T(p) + U(q) selected by a HamiltonianKind.
class SeparableFlow {
public:
  SeparableFlow(HamiltonianKind kind, const EnhancedHamiltonian& model) : kind_(kind), model_(&model) {}

  HamiltonianKind kind() const noexcept { return kind_; }
  double momentum_offset() const noexcept { return kind_ == HamiltonianKind::enhanced ? model_->twist_momentum() : 0.0; }

  double velocity(double p) const { return 2.0 * (p + momentum_offset()); }

  double force(double q) const {
    return kind_ == HamiltonianKind::enhanced ? -model_->effective_potential_derivative(q) : -model_->potential().derivative(q);
  }

  double energy(double p, double q) const {
    return kind_ == HamiltonianKind::enhanced ? (*model_)(p, q) : classical_hamiltonian(model_->potential(), p, q);
  }

  /// √(2 Σ n² w_n (|a_n| + |b_n|)): bound on the small-oscillation frequency.
  double frequency_scale() const {
    const auto& V = model_->potential();
    double s = 0.0;
    for (int n = 1; n <= V.degree(); ++n) {
      const double w = kind_ == HamiltonianKind::enhanced ? model_->attenuation_factors()[static_cast<std::size_t>(n - 1)] : 1.0;
      s += w * n * n * (std::abs(V.a(n)) + std::abs(V.b(n)));
    }
    return std::sqrt(2.0 * s);
  }

private:
  HamiltonianKind kind_;
  const EnhancedHamiltonian* model_;
};

/// Largest accepted dt · frequency_scale.
inline constexpr double stability_limit = 0.1;

/// 0.01 / √max(1, Σ n²(|a_n| + |b_n|)).
inline double default_time_step(const TrigPotential& V) { return 0.01 / std::sqrt(std::max(1.0, V.curvature_scale())); }

inline Trajectory evolve(HamiltonianKind kind, const EnhancedHamiltonian& model, const PhasePoint& start, double dt, long steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("evolve: dt must be positive");
  if (steps < 1) throw DomainError("evolve: steps must be positive");
  const SeparableFlow flow(kind, model);
  if (dt * flow.frequency_scale() > stability_limit)
    throw StepSizeError("evolve: dt = " + std::to_string(dt) + " exceeds the stability limit " +
                        std::to_string(stability_limit / flow.frequency_scale()));

  Trajectory traj;
  traj.kind = kind;
  traj.dt = dt;
  const auto count = static_cast<std::size_t>(steps) + 1;
  traj.times.reserve(count);
  traj.points.reserve(count);
  traj.energies.reserve(count);

  double q = start.q_unwrapped;
  double p = start.p;
  double f = flow.force(q);
  const auto record = [&](long k) {
    traj.times.push_back(dt * static_cast<double>(k));
    traj.points.push_back(PhasePoint::at(q, p));
    traj.energies.push_back(flow.energy(p, q));
  };
  record(0);
  const double half = 0.5 * dt;
  for (long k = 1; k <= steps; ++k) {
    p += half * f;
    q += dt * flow.velocity(p);
    f = flow.force(q);
    p += half * f;
    record(k);
  }
  return traj;
}

/// Time reversal of the flow: the kinetic momentum p + offset changes sign.
inline PhasePoint time_reversed(HamiltonianKind kind, const EnhancedHamiltonian& model, const PhasePoint& point) {
  const double offset = SeparableFlow(kind, model).momentum_offset();
  return PhasePoint{point.q, point.q_unwrapped, -point.p - 2.0 * offset};
}

/// Runs the enhanced flow for each twist with initial momentum p_0 - ħα and
/// returns the largest deviation of (q_unwrapped(t), p(t) + ħα) from the first
/// run. With `compensate` false every run starts at p_0 (negative control).
inline double alpha_invariance_check(const EnhancedHamiltonian& model, const PhasePoint& start, const std::vector<double>& alphas,
                                     double dt, long steps, bool compensate = true) {
  if (alphas.empty()) return 0.0;
  const FiducialSpec& base = model.spec();
  std::vector<Trajectory> runs;
  std::vector<double> offsets;
  for (double alpha : alphas) {
    const FiducialSpec spec(base.r(), alpha, base.hbar());
    const EnhancedHamiltonian H(model.potential(), spec);
    const double offset = H.twist_momentum();
    const double p0 = compensate ? start.p - offset : start.p;
    runs.push_back(evolve(HamiltonianKind::enhanced, H, PhasePoint::at(start.q_unwrapped, p0), dt, steps));
    offsets.push_back(offset);
  }
  double worst = 0.0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    for (std::size_t k = 0; k < runs[r].size(); ++k) {
      const auto& a = runs[0].points[k];
      const auto& b = runs[r].points[k];
      worst = std::max(worst, std::abs(a.q_unwrapped - b.q_unwrapped));
      worst = std::max(worst, std::abs((a.p + offsets[0]) - (b.p + offsets[r])));
    }
  return worst;
}

/// Σ_k [p̄_k Δq_k - H̄_k Δt] with midpoint averages over each step, plus
/// ħα (q(T) - q(0)) when `include_surface` is set.
inline double action_along(const Trajectory& traj, const EnhancedHamiltonian& model, bool include_surface) {
  double action = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const auto& a = traj.points[k];
    const auto& b = traj.points[k + 1];
    const double p_mid = 0.5 * (a.p + b.p);
    const double h_mid = 0.5 * (traj.energies[k] + traj.energies[k + 1]);
    action += p_mid * (b.q_unwrapped - a.q_unwrapped) - h_mid * (traj.times[k + 1] - traj.times[k]);
  }
  if (include_surface)
    action += surface_integral(model.spec().alpha(), model.spec().hbar(), traj.front().q_unwrapped, traj.back().q_unwrapped);
  return action;
}

} // namespace eqcircle
