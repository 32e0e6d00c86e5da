#pragma once

// Run configuration: flat `key = value` text with dotted section prefixes.
//
//   # comment
//   model.hbar  = 1.0
//   model.a     = 1.0, 0.0, 0.25     # lists are comma separated
//
// Every key has a default; unknown keys and malformed lines are errors that
// name the offending key or line. See docs/config.md for the full grammar.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqcircle::cli {

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Environment variable that overrides output.dir.
inline constexpr const char* output_env_var = "EQCIRCLE_OUTPUT_DIR";

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(key + ": expected a number, got an empty value");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + t + "' is not a number");
  }
  if (used != t.size()) throw ConfigError(key + ": '" + t + "' is not a number");
  return v;
}

inline long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + t + "' is not an integer");
  }
  if (used != t.size()) throw ConfigError(key + ": '" + t + "' is not an integer");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

} // namespace detail

struct RunConfig {
  // model
  double hbar = 1.0;
  double alpha = 0.0;
  double r = 1.0;
  double a0 = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  // numerics
  long cutoff = 0;  // 0: default lattice half-width
  long quad_nodes = 512;
  double dt = 0.0;  // 0: default step
  long steps = 1000;
  // fiducial
  long bound_samples = 10000;
  long profile_points = 512;
  long max_harmonic = 4;
  // unity
  std::vector<double> unity_ladder{5.0, 10.0, 20.0, 40.0};
  long unity_p_nodes = 64;
  std::string unity_mode = "analytic";
  // hamiltonian
  double ham_p_min = -3.0;
  double ham_p_max = 3.0;
  long ham_p_points = 61;
  long ham_q_points = 64;
  // evolve
  std::string evolve_kind = "both";
  double evolve_q0 = 0.0;
  double evolve_p0 = 1.0;
  // compare
  double compare_q0 = 0.0;
  double compare_p0 = 0.0;
  double compare_T = 5.0;
  double compare_dt = 0.01;
  std::vector<double> compare_rh_sweep;
  std::vector<double> compare_alpha_sweep;
  // selftest
  long selftest_samples = 10;
  // run
  unsigned long seed = 12345;
  std::string output_dir = "out";

  /// Applies one `key = value` assignment.
  void set(const std::string& raw_key, const std::string& value) {
    const std::string key = detail::trim(raw_key);
    using detail::parse_double;
    using detail::parse_integer;
    using detail::parse_list;
    const std::string v = detail::trim(value);
    if (key == "model.hbar") hbar = parse_double(key, v);
    else if (key == "model.alpha") alpha = parse_double(key, v);
    else if (key == "model.r") r = parse_double(key, v);
    else if (key == "model.a0") a0 = parse_double(key, v);
    else if (key == "model.a") a = parse_list(key, v);
    else if (key == "model.b") b = parse_list(key, v);
    else if (key == "numerics.cutoff") cutoff = parse_integer(key, v);
    else if (key == "numerics.quad_nodes") quad_nodes = parse_integer(key, v);
    else if (key == "numerics.dt") dt = parse_double(key, v);
    else if (key == "numerics.steps") steps = parse_integer(key, v);
    else if (key == "fiducial.samples") bound_samples = parse_integer(key, v);
    else if (key == "fiducial.profile_points") profile_points = parse_integer(key, v);
    else if (key == "fiducial.max_harmonic") max_harmonic = parse_integer(key, v);
    else if (key == "unity.ladder") unity_ladder = parse_list(key, v);
    else if (key == "unity.p_nodes") unity_p_nodes = parse_integer(key, v);
    else if (key == "unity.mode") unity_mode = v;
    else if (key == "hamiltonian.p_min") ham_p_min = parse_double(key, v);
    else if (key == "hamiltonian.p_max") ham_p_max = parse_double(key, v);
    else if (key == "hamiltonian.p_points") ham_p_points = parse_integer(key, v);
    else if (key == "hamiltonian.q_points") ham_q_points = parse_integer(key, v);
    else if (key == "evolve.kind") evolve_kind = v;
    else if (key == "evolve.q0") evolve_q0 = parse_double(key, v);
    else if (key == "evolve.p0") evolve_p0 = parse_double(key, v);
    else if (key == "compare.q0") compare_q0 = parse_double(key, v);
    else if (key == "compare.p0") compare_p0 = parse_double(key, v);
    else if (key == "compare.T") compare_T = parse_double(key, v);
    else if (key == "compare.dt") compare_dt = parse_double(key, v);
    else if (key == "compare.rh_sweep") compare_rh_sweep = parse_list(key, v);
    else if (key == "compare.alpha_sweep") compare_alpha_sweep = parse_list(key, v);
    else if (key == "selftest.samples") selftest_samples = parse_integer(key, v);
    else if (key == "run.seed") seed = static_cast<unsigned long>(parse_integer(key, v));
    else if (key == "output.dir") output_dir = v;
    else throw ConfigError("unknown key '" + key + "'");
  }

  /// Applies a `key=value` override as given on the command line.
  void set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
  }

  void load_text(const std::string& text, const std::string& origin = "<config>") {
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
      try {
        set(line.substr(0, eq), line.substr(eq + 1));
      } catch (const ConfigError& e) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str(), path);
  }

  /// b defaults to zeros of the same length as a.
  std::vector<double> sin_coefficients() const { return b.empty() ? std::vector<double>(a.size(), 0.0) : b; }

  /// Checks every parameter against its domain; the message names the key.
  void validate() const {
    const auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
    if (!(hbar > 0.0) || !std::isfinite(hbar)) fail("model.hbar", "must be positive and finite");
    if (!std::isfinite(alpha)) fail("model.alpha", "must be finite");
    if (!(r >= 0.0) || !std::isfinite(r)) fail("model.r", "must be nonnegative and finite");
    if (!std::isfinite(a0)) fail("model.a0", "must be finite");
    if (!b.empty() && b.size() != a.size()) fail("model.b", "must have the same length as model.a");
    for (double x : a)
      if (!std::isfinite(x)) fail("model.a", "entries must be finite");
    for (double x : b)
      if (!std::isfinite(x)) fail("model.b", "entries must be finite");
    if (cutoff < 0) fail("numerics.cutoff", "must be 0 (automatic) or positive");
    if (cutoff > 0 && cutoff <= static_cast<long>(a.size())) fail("numerics.cutoff", "must exceed the potential degree");
    if (quad_nodes < 16 || quad_nodes % 2 != 0) fail("numerics.quad_nodes", "must be even and at least 16");
    if (!(dt >= 0.0) || !std::isfinite(dt)) fail("numerics.dt", "must be 0 (automatic) or positive");
    if (steps < 1) fail("numerics.steps", "must be positive");
    if (bound_samples < 1) fail("fiducial.samples", "must be positive");
    if (profile_points < 2) fail("fiducial.profile_points", "must be at least 2");
    if (max_harmonic < 0) fail("fiducial.max_harmonic", "must be nonnegative");
    if (unity_ladder.empty()) fail("unity.ladder", "must list at least one cutoff factor");
    for (double f : unity_ladder)
      if (!(f > 0.0)) fail("unity.ladder", "factors must be positive");
    if (unity_p_nodes < 64) fail("unity.p_nodes", "must be at least 64");
    if (unity_mode != "analytic" && unity_mode != "full") fail("unity.mode", "must be 'analytic' or 'full'");
    if (!(ham_p_max > ham_p_min)) fail("hamiltonian.p_max", "must exceed hamiltonian.p_min");
    if (ham_p_points < 2) fail("hamiltonian.p_points", "must be at least 2");
    if (ham_q_points < 2) fail("hamiltonian.q_points", "must be at least 2");
    if (evolve_kind != "both" && evolve_kind != "classical" && evolve_kind != "enhanced")
      fail("evolve.kind", "must be 'both', 'classical' or 'enhanced'");
    if (!(compare_T > 0.0)) fail("compare.T", "must be positive");
    if (!(compare_dt >= 0.0)) fail("compare.dt", "must be 0 (automatic) or positive");
    for (double x : compare_rh_sweep)
      if (!(x > 0.0)) fail("compare.rh_sweep", "entries must be positive");
    if (!compare_rh_sweep.empty() && !(r > 0.0)) fail("compare.rh_sweep", "requires model.r > 0");
    for (double x : compare_alpha_sweep)
      if (!std::isfinite(x)) fail("compare.alpha_sweep", "entries must be finite");
    if (selftest_samples < 1) fail("selftest.samples", "must be positive");
  }

  /// output.dir, unless the environment variable overrides it.
  std::string resolved_output_dir() const {
    if (const char* env = std::getenv(output_env_var); env != nullptr && *env != '\0') return env;
    return output_dir;
  }
};

} // namespace eqcircle::cli
