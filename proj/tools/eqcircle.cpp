// eqcircle: batch driver for the coherent-state toolkit on the circle.
//
//   eqcircle <command> [--config FILE] [--set key=value]... [--out DIR]
//
// Exit codes: 0 success, 1 configuration or domain error, 2 numerical
// contract violation, 3 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "eqcircle/cli/commands.hpp"

namespace {

using namespace eqcircle;
using namespace eqcircle::cli;

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

RunConfig load(const Options& opt) {
  RunConfig c;
  if (!opt.config.empty()) c.load_file(opt.config);
  for (const auto& s : opt.overrides) c.set_assignment(s);
  if (!opt.out.empty()) c.output_dir = opt.out;
  return c;
}

int report(const std::string& name, const CommandResult& res) {
  for (const auto& f : res.files) std::cout << "wrote " << f.string() << '\n';
  for (const auto& v : res.violations) std::cerr << "contract violation: " << v << '\n';
  std::cout << name << ": " << (res.violations.empty() ? "all contracts hold" : std::to_string(res.violations.size()) + " contract(s) violated")
            << '\n';
  return res.exit_code();
}

int run(const std::string& name, const std::function<CommandResult(const RunConfig&)>& cmd, const Options& opt) {
  try {
    return report(name, cmd(load(opt)));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_io;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return exit_contract;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return exit_contract;
  } catch (const StepSizeError& e) {
    std::cerr << "step size error: " << e.what() << '\n';
    return exit_contract;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return exit_io;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent states, enhanced quantization and dynamics on the circle"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, std::function<CommandResult(const RunConfig&)>>> commands{
      {"fiducial", {"fiducial profile, moments, attenuation factors and envelope bound", cmd_fiducial}},
      {"unity", {"resolution-of-unity defects along a momentum-cutoff ladder", cmd_unity}},
      {"hamiltonian", {"enhanced Hamiltonian on a (p, q) grid", cmd_hamiltonian}},
      {"evolve", {"classical and enhanced trajectories", cmd_evolve}},
      {"compare", {"quantum evolution against the enhanced flow", cmd_compare}},
      {"selftest", {"quick invariant checks on the configured model", cmd_selftest}},
  };

  Options opt;
  std::string chosen;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", opt.config, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", opt.overrides, "override a key, e.g. --set model.hbar=0.1")->allow_extra_args(false);
    sub->add_option("--out", opt.out, "output directory (EQCIRCLE_OUTPUT_DIR still takes precedence)");
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }
  return run(chosen, commands.at(chosen).second, opt);
}
