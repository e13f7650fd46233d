#include <iostream>

#include "CLI11.hpp"
#include "levyspec/cli.hpp"
#include "levyspec/errors.hpp"

namespace levyspec::cli {

int run_main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for randomly time-changed killed Levy "
               "processes and their dual spin systems"};
  app.require_subcommand(1);

  std::string config_path;
  CmdOptions opt;
  std::uint64_t seed_flag = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", seed_flag, "override mc.seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  };

  auto* p_potential = app.add_subcommand("potential", "tabulate v^r");
  auto* p_spectrum = app.add_subcommand("spectrum", "solve the spectrum");
  auto* p_partition = app.add_subcommand("partition", "partition functions");
  auto* p_moments = app.add_subcommand("moments", "survival-time moments");
  auto* p_simulate = app.add_subcommand("simulate", "Monte Carlo survival");
  auto* p_gibbs = app.add_subcommand("gibbs", "ring-spin Metropolis sampler");
  auto* p_smallr = app.add_subcommand("smallr", "small kill-rate scaling");
  auto* p_verify = app.add_subcommand("verify", "cross-check battery");
  p_verify->add_flag("--tamper-kernel", opt.tamper_kernel,
                     "corrupt one kernel entry (self-test of the battery)");
  for (auto* sub : {p_potential, p_spectrum, p_partition, p_moments,
                    p_simulate, p_gibbs, p_smallr, p_verify})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg = parse_config_file(config_path);
    if (seed_set) opt.seed = seed_flag;
    if (p_potential->parsed()) return cmd_potential(cfg, opt);
    if (p_spectrum->parsed()) return cmd_spectrum(cfg, opt);
    if (p_partition->parsed()) return cmd_partition(cfg, opt);
    if (p_moments->parsed()) return cmd_moments(cfg, opt);
    if (p_simulate->parsed()) return cmd_simulate(cfg, opt);
    if (p_gibbs->parsed()) return cmd_gibbs(cfg, opt);
    if (p_smallr->parsed()) return cmd_smallr(cfg, opt);
    if (p_verify->parsed()) return cmd_verify(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kConfigError;
}

}  // namespace levyspec::cli
