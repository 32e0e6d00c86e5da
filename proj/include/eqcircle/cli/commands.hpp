#pragma once

// Batch commands behind the eqcircle tool. Each command validates its
// configuration, writes CSV tables plus a gnuplot script into the output
// directory, and reports any numerical contract that did not hold.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eqcircle/cli/config.hpp"
#include "eqcircle/cli/csv.hpp"
#include "eqcircle/coherent.hpp"
#include "eqcircle/dynamics.hpp"
#include "eqcircle/enhanced.hpp"
#include "eqcircle/fiducial.hpp"
#include "eqcircle/hilbert.hpp"
#include "eqcircle/qevolve.hpp"

namespace eqcircle::cli {

namespace fs = std::filesystem;

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_contract = 2, exit_io = 3 };

struct CommandResult {
  std::vector<fs::path> files;
  std::vector<std::string> violations;

  int exit_code() const { return violations.empty() ? exit_ok : exit_contract; }
};

inline FiducialSpec make_spec(const RunConfig& c) { return FiducialSpec(c.r, c.alpha, c.hbar); }

inline TrigPotential make_potential(const RunConfig& c) { return TrigPotential(c.a0, c.a, c.sin_coefficients()); }

inline TwistedBasis make_basis(const RunConfig& c, const FiducialSpec& spec, int degree) {
  if (c.cutoff > 0) return TwistedBasis(spec.alpha(), spec.hbar(), static_cast<int>(c.cutoff));
  return spec.default_basis(degree);
}

inline double time_step(const RunConfig& c, const TrigPotential& V) { return c.dt > 0.0 ? c.dt : default_time_step(V); }

/// Width scale √(ħ·max(r, ħ)) for the unity cutoff ladder.
inline double unity_scale(const FiducialSpec& spec) { return std::sqrt(spec.hbar() * std::max(spec.r(), spec.hbar())); }

namespace detail {

inline void check(CommandResult& res, bool ok, const std::string& what) {
  if (!ok) res.violations.push_back(what);
}

inline fs::path prepare(const RunConfig& c) {
  c.validate();
  const fs::path dir = c.resolved_output_dir();
  ensure_directory(dir);
  return dir;
}

} // namespace detail

inline CommandResult cmd_fiducial(const RunConfig& c) {
  const fs::path dir = detail::prepare(c);
  CommandResult res;
  const FiducialSpec spec = make_spec(c);
  const QuadratureGrid grid(static_cast<std::size_t>(c.quad_nodes));
  const TwistedBasis basis = make_basis(c, spec, 0);

  {
    CsvWriter w(dir / "fiducial_profile.csv", "fiducial_profile",
                {"theta", "density", "upper_envelope", "lower_envelope", "re_eta", "im_eta"});
    for (long j = 0; j < c.profile_points; ++j) {
      const double t = -pi + two_pi * static_cast<double>(j) / static_cast<double>(c.profile_points);
      const complex e = evaluate(spec, t);
      w.row({t, std::norm(e), upper_envelope(spec, t), lower_envelope(spec, t), e.real(), e.imag()});
    }
    res.files.push_back(w.path());
  }

  const FiducialMoments m = moments(spec, static_cast<int>(c.max_harmonic), grid);
  {
    CsvWriter w(dir / "fiducial_moments.csv", "fiducial_moments",
                {"r", "alpha", "hbar", "mean_q", "mean_p", "var_p", "var_p_closed_form", "norm_squared", "cross_check_defect"});
    w.row({spec.r(), spec.alpha(), spec.hbar(), m.mean_q, m.mean_p, m.var_p, momentum_variance_closed_form(spec), m.norm_squared,
           m.cross_check_defect});
    res.files.push_back(w.path());
  }
  detail::check(res, std::abs(m.mean_q) <= 1e-9, "fiducial: |<Q>| exceeds 1e-9");
  detail::check(res, std::abs(m.mean_p - spec.hbar() * spec.alpha()) <= 1e-9, "fiducial: <P_alpha> differs from hbar*alpha by more than 1e-9");
  detail::check(res, m.cross_check_defect <= 1e-10, "fiducial: closed form and quadrature moments disagree beyond 1e-10");

  {
    CsvWriter w(dir / "fiducial_attenuation.csv", "fiducial_attenuation", {"n", "rho", "rho_quadrature", "z_times_one_minus_rho"});
    const double z = 2.0 * spec.r_over_hbar();
    for (long n = 0; n <= c.max_harmonic; ++n) {
      const double rho = m.cos_moments[static_cast<std::size_t>(n)];
      w.row({static_cast<double>(n), rho, attenuation_quadrature(spec, static_cast<int>(n), grid), z * (1.0 - rho)});
    }
    res.files.push_back(w.path());
  }

  {
    CsvWriter w(dir / "fiducial_bound.csv", "fiducial_bound", {"r_over_hbar", "K", "samples", "holds", "violating_theta"});
    if (spec.r() > 0.0) {
      const GaussianBoundResult g = gaussian_bound_check(spec, static_cast<int>(c.bound_samples));
      w.row({spec.r_over_hbar(), g.K, static_cast<double>(c.bound_samples), g.holds ? 1.0 : 0.0, g.violating_theta.value_or(std::nan(""))});
      detail::check(res, g.holds, "fiducial: Gaussian envelope bound violated");
    } else {
      // bound is undefined for the uniform state
      w.row({0.0, 1.0, static_cast<double>(c.bound_samples), -1.0, std::nan("")});
    }
    res.files.push_back(w.path());
  }

  {
    const MomentumState coeffs = momentum_coefficients(spec, basis);
    CsvWriter w(dir / "fiducial_coefficients.csv", "fiducial_coefficients", {"n", "momentum", "coefficient"});
    for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) w.row({double(n), momentum_eigenvalue(basis, n), coeffs[n].real()});
    res.files.push_back(w.path());
  }

  write_text(dir / "plot_fiducial.gp",
             "# gnuplot script: |eta(theta)|^2 against both Gaussian envelopes\n"
             "set datafile separator ','\n"
             "set datafile commentschars '#'\n"
             "set key autotitle columnhead\n"
             "set xlabel 'theta'\n"
             "set logscale y\n"
             "set terminal pngcairo size 900,600\n"
             "set output 'fiducial_profile.png'\n"
             "plot 'fiducial_profile.csv' using 1:2 with lines lw 2, \\\n"
             "     '' using 1:3 with lines dt 2, \\\n"
             "     '' using 1:4 with lines dt 3\n");
  res.files.push_back(dir / "plot_fiducial.gp");
  return res;
}

inline CommandResult cmd_unity(const RunConfig& c) {
  const fs::path dir = detail::prepare(c);
  CommandResult res;
  const FiducialSpec spec = make_spec(c);
  const TwistedBasis basis = make_basis(c, spec, 0);
  const UnityMode mode = c.unity_mode == "full" ? UnityMode::full_2d : UnityMode::analytic_q;
  const double scale = unity_scale(spec);

  CsvWriter defects(dir / "unity_defects.csv", "unity_defects",
                    {"factor", "p_cutoff", "p_nodes", "q_nodes", "diag_defect", "interior_defect", "offdiag_defect"});
  CsvWriter diagonal(dir / "unity_diagonal.csv", "unity_diagonal", {"p_cutoff", "n", "m_nn"});
  double previous_diag = INFINITY;
  double previous_interior = INFINITY;
  for (double factor : c.unity_ladder) {
    const UnityReport rep = verify_unity(spec, basis, factor * scale, static_cast<std::size_t>(c.unity_p_nodes), mode);
    defects.row({factor, rep.p_cutoff, double(rep.p_nodes), double(rep.q_nodes), rep.diag_defect, rep.interior_defect, rep.offdiag_defect});
    for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) diagonal.row({rep.p_cutoff, double(n), rep.diagonal[basis.slot(n)]});
    detail::check(res, rep.offdiag_defect <= 1e-10, "unity: off-diagonal defect above 1e-10 at p_cutoff " + format_number(rep.p_cutoff));
    detail::check(res, rep.diag_defect <= previous_diag, "unity: diagonal defect increased along the cutoff ladder");
    detail::check(res, rep.interior_defect < previous_interior, "unity: interior defect not strictly decreasing along the ladder");
    previous_diag = rep.diag_defect;
    previous_interior = rep.interior_defect;
  }
  res.files.push_back(defects.path());
  res.files.push_back(diagonal.path());

  write_text(dir / "plot_unity.gp",
             "# gnuplot script: resolution-of-unity defects against the momentum cutoff\n"
             "set datafile separator ','\n"
             "set datafile commentschars '#'\n"
             "set key autotitle columnhead\n"
             "set logscale xy\n"
             "set xlabel 'p_cutoff'\n"
             "set terminal pngcairo size 900,600\n"
             "set output 'unity_defects.png'\n"
             "plot 'unity_defects.csv' using 2:5 with linespoints, '' using 2:6 with linespoints\n");
  res.files.push_back(dir / "plot_unity.gp");
  return res;
}

inline CommandResult cmd_hamiltonian(const RunConfig& c) {
  const fs::path dir = detail::prepare(c);
  CommandResult res;
  const FiducialSpec spec = make_spec(c);
  const EnhancedHamiltonian H(make_potential(c), spec);

  {
    CsvWriter w(dir / "hamiltonian_grid.csv", "hamiltonian_grid",
                {"p", "q", "h_alpha", "h_alpha_shifted", "h_classical", "correction"});
    for (long i = 0; i < c.ham_p_points; ++i) {
      const double p = c.ham_p_min + (c.ham_p_max - c.ham_p_min) * double(i) / double(c.ham_p_points - 1);
      for (long j = 0; j < c.ham_q_points; ++j) {
        const double q = -pi + two_pi * double(j) / double(c.ham_q_points);
        const double hc = classical_hamiltonian(H.potential(), p, q);
        const double hs = H.shifted(p, q);
        w.row({p, q, H(p, q), hs, hc, hs - hc - H.kinetic_offset()});
      }
    }
    res.files.push_back(w.path());
  }
  {
    CsvWriter w(dir / "hamiltonian_summary.csv", "hamiltonian_summary", {"n", "rho", "kinetic_offset", "twist_momentum"});
    w.row({0.0, 1.0, H.kinetic_offset(), H.twist_momentum()});
    for (int n = 1; n <= H.potential().degree(); ++n)
      w.row({double(n), H.attenuation_factors()[static_cast<std::size_t>(n - 1)], H.kinetic_offset(), H.twist_momentum()});
    res.files.push_back(w.path());
  }
  write_text(dir / "plot_hamiltonian.gp",
             "# gnuplot script: enhanced Hamiltonian on the (p, q) grid\n"
             "set datafile separator ','\n"
             "set datafile commentschars '#'\n"
             "set xlabel 'q'\n"
             "set ylabel 'p'\n"
             "set view map\n"
             "set dgrid3d\n"
             "set terminal pngcairo size 900,600\n"
             "set output 'hamiltonian_grid.png'\n"
             "splot 'hamiltonian_grid.csv' every ::1 using 2:1:3 with pm3d notitle\n");
  res.files.push_back(dir / "plot_hamiltonian.gp");
  return res;
}

namespace detail {

inline void write_trajectory(const fs::path& path, const std::string& schema, const Trajectory& t, double twist) {
  CsvWriter w(path, schema, {"t", "q", "q_unwrapped", "p", "kinetic_momentum", "energy"});
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& x = t.points[k];
    w.row({t.times[k], x.q, x.q_unwrapped, x.p, x.p + twist, t.energies[k]});
  }
}

} // namespace detail

inline CommandResult cmd_evolve(const RunConfig& c) {
  const fs::path dir = detail::prepare(c);
  CommandResult res;
  const FiducialSpec spec = make_spec(c);
  const EnhancedHamiltonian H(make_potential(c), spec);
  const double dt = time_step(c, H.potential());
  std::vector<HamiltonianKind> kinds;
  if (c.evolve_kind != "enhanced") kinds.push_back(HamiltonianKind::classical);
  if (c.evolve_kind != "classical") kinds.push_back(HamiltonianKind::enhanced);

  CsvWriter summary(dir / "evolve_summary.csv", "evolve_summary",
                    {"kind", "dt", "steps", "energy_excursion", "winding", "action", "action_with_surface"});
  for (HamiltonianKind kind : kinds) {
    const Trajectory t = evolve(kind, H, PhasePoint::at(c.evolve_q0, c.evolve_p0), dt, c.steps);
    const double twist = kind == HamiltonianKind::enhanced ? H.twist_momentum() : 0.0;
    const fs::path path = dir / (std::string("evolve_") + to_string(kind) + ".csv");
    detail::write_trajectory(path, std::string("evolve_") + to_string(kind), t, twist);
    res.files.push_back(path);
    summary.row({kind == HamiltonianKind::classical ? 0.0 : 1.0, dt, double(c.steps), t.energy_excursion(), double(t.winding_number()),
                 action_along(t, H, false), action_along(t, H, true)});
  }
  res.files.push_back(summary.path());
  write_text(dir / "plot_evolve.gp",
             "# gnuplot script: phase portrait of the evolved trajectories\n"
             "set datafile separator ','\n"
             "set datafile commentschars '#'\n"
             "set key autotitle columnhead\n"
             "set xlabel 'q'\n"
             "set ylabel 'kinetic momentum'\n"
             "set terminal pngcairo size 900,600\n"
             "set output 'evolve.png'\n"
             "files = system('ls evolve_classical.csv evolve_enhanced.csv 2>/dev/null')\n"
             "plot for [f in files] f using 2:5 with lines title f\n");
  res.files.push_back(dir / "plot_evolve.gp");
  return res;
}

inline CommandResult cmd_compare(const RunConfig& c) {
  const fs::path dir = detail::prepare(c);
  CommandResult res;
  const FiducialSpec spec = make_spec(c);
  const TrigPotential V = make_potential(c);
  const double dt = c.compare_dt > 0.0 ? c.compare_dt : default_time_step(V);
  const CoherentLabel label(c.compare_p0, c.compare_q0);

  CsvWriter summary(dir / "compare_summary.csv", "compare_summary",
                    {"r_over_hbar", "hbar", "alpha", "max_phase_deviation", "max_momentum_deviation", "ehrenfest_time", "window_closed"});
  const auto run = [&](const FiducialSpec& s, bool write_traces) {
    const EnhancedHamiltonian H(V, s);
    const TwistedBasis basis = make_basis(c, s, V.degree());
    const ComparisonReport rep = compare_restricted(H, basis, label, c.compare_T, dt);
    summary.row({s.r_over_hbar(), s.hbar(), s.alpha(), rep.max_phase_deviation, rep.max_momentum_deviation, rep.ehrenfest_time,
                 rep.window_closed ? 1.0 : 0.0});
    if (!write_traces) return;
    const long steps = static_cast<long>(rep.times.size()) - 1;
    // classical run starts from the same kinetic momentum p + ħα
    const Trajectory cl = evolve(HamiltonianKind::classical, H, PhasePoint::at(label.q, label.p + H.twist_momentum()), dt, steps);
    detail::write_trajectory(dir / "compare_classical.csv", "compare_classical", cl, 0.0);
    detail::write_trajectory(dir / "compare_enhanced.csv", "compare_enhanced", rep.enhanced, H.twist_momentum());
    {
      CsvWriter w(dir / "compare_quantum.csv", "compare_quantum", {"t", "cos_q", "sin_q", "kinetic_momentum", "norm", "energy"});
      const auto& qt = rep.quantum;
      for (std::size_t k = 0; k < qt.size(); ++k) w.row({qt.times[k], qt.cos_q[k], qt.sin_q[k], qt.mean_p[k], qt.norm[k], qt.energy[k]});
    }
    {
      CsvWriter w(dir / "compare_deviation.csv", "compare_deviation", {"t", "phase_deviation", "momentum_deviation"});
      for (std::size_t k = 0; k < rep.times.size(); ++k) w.row({rep.times[k], rep.phase_deviation[k], rep.momentum_deviation[k]});
    }
    res.files.push_back(dir / "compare_classical.csv");
    res.files.push_back(dir / "compare_enhanced.csv");
    res.files.push_back(dir / "compare_quantum.csv");
    res.files.push_back(dir / "compare_deviation.csv");
  };
  run(spec, true);
  // r/ħ sweep at fixed r
  for (double rh : c.compare_rh_sweep) run(FiducialSpec(spec.r(), spec.alpha(), spec.r() / rh), false);
  res.files.push_back(summary.path());

  if (!c.compare_alpha_sweep.empty()) {
    const EnhancedHamiltonian H(V, spec);
    CsvWriter w(dir / "compare_alpha.csv", "compare_alpha", {"alpha", "deviation_compensated", "deviation_uncompensated"});
    const long steps = std::max(1L, std::lround(c.compare_T / dt));
    const PhasePoint start = PhasePoint::at(label.q, label.p);
    for (double a : c.compare_alpha_sweep) {
      const std::vector<double> pair{spec.alpha(), a};
      const double comp = alpha_invariance_check(H, start, pair, dt, steps, true);
      w.row({reduce_twist(a), comp, alpha_invariance_check(H, start, pair, dt, steps, false)});
      detail::check(res, comp <= 1e-10, "compare: alpha-invariance deviation above 1e-10 for alpha " + format_number(a));
    }
    res.files.push_back(w.path());
  }

  write_text(dir / "plot_compare.gp",
             "# gnuplot script: classical, enhanced and quantum traces\n"
             "set datafile separator ','\n"
             "set datafile commentschars '#'\n"
             "set key autotitle columnhead\n"
             "set xlabel 't'\n"
             "set terminal pngcairo size 1200,500\n"
             "set output 'compare.png'\n"
             "set multiplot layout 1,2\n"
             "set ylabel 'cos q'\n"
             "plot 'compare_classical.csv' using 1:(cos($2)) with lines title 'classical', \\\n"
             "     'compare_enhanced.csv' using 1:(cos($2)) with lines title 'enhanced', \\\n"
             "     'compare_quantum.csv' using 1:($2/sqrt($2**2+$3**2)) with lines title 'quantum'\n"
             "set ylabel 'kinetic momentum'\n"
             "plot 'compare_classical.csv' using 1:5 with lines title 'classical', \\\n"
             "     'compare_enhanced.csv' using 1:5 with lines title 'enhanced', \\\n"
             "     'compare_quantum.csv' using 1:4 with lines title 'quantum'\n"
             "unset multiplot\n");
  res.files.push_back(dir / "plot_compare.gp");
  return res;
}

/// Quick invariant checks on the configured model; one CSV row per check.
inline CommandResult cmd_selftest(const RunConfig& c) {
  const fs::path dir = detail::prepare(c);
  CommandResult res;
  const FiducialSpec spec = make_spec(c);
  const TrigPotential V = make_potential(c);
  CsvWriter w(dir / "selftest.csv", "selftest", {"check", "value", "tolerance", "pass"});
  int id = 0;
  const auto record = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    w.row({double(++id), value, tol, ok ? 1.0 : 0.0});
    detail::check(res, ok, "selftest " + std::to_string(id) + " (" + name + "): " + format_number(value) + " > " + format_number(tol));
  };

  const FiducialMoments m = moments(spec, 2);
  record("centering_q", std::abs(m.mean_q), 1e-9);
  record("centering_p", std::abs(m.mean_p - spec.hbar() * spec.alpha()), 1e-9);
  record("moment_dual_paths", m.cross_check_defect, 1e-10);

  {
    const TwistedBasis basis(spec.alpha(), spec.hbar(), 16);
    const QuantumPropagator U(build_hamiltonian(TrigPotential::free(), basis));
    std::vector<double> expected;
    for (int n = -16; n <= 16; ++n) expected.push_back(std::pow(momentum_eigenvalue(basis, n), 2));
    std::sort(expected.begin(), expected.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, std::abs(U.eigenvalues()(Eigen::Index(i)) - expected[i]));
    record("free_spectrum", worst, 1e-10);
  }
  {
    const TwistedBasis basis(spec.alpha(), spec.hbar(), 6);
    const UnityReport rep = verify_unity(spec, basis, 5.0 * unity_scale(spec), 64, UnityMode::full_2d);
    record("unity_offdiag", rep.offdiag_defect, 1e-10);
  }
  {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> up(-3.0, 3.0);
    std::uniform_real_distribution<double> uq(-pi, pi);
    const EnhancedHamiltonian H(V, spec);
    double worst = 0.0;
    for (long i = 0; i < c.selftest_samples; ++i) {
      const CoherentLabel label(up(rng), uq(rng));
      worst = std::max(worst, std::abs(H(label.p, label.q) - hamiltonian_expectation_quadrature(V, spec, label)));
    }
    record("hamiltonian_oracle", worst, 1e-8 * std::max(1.0, 1.0 + V.coefficient_sum()));
    const double dt = default_time_step(V);
    record("alpha_invariance", alpha_invariance_check(H, PhasePoint::at(0.3, 0.7), {0.0, 0.25, 0.5, 0.75}, dt, 200), 1e-10);
  }
  res.files.push_back(w.path());
  return res;
}

} // namespace eqcircle::cli
