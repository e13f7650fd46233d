#ifndef LEVYSPEC_CONFIG_HPP
#define LEVYSPEC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levyspec/grid.hpp"
#include "levyspec/mass.hpp"
#include "levyspec/levy_model.hpp"

namespace levyspec {

/// Plain key=value run configuration ('#' comments, blank lines ignored).
/// Parsing never touches the output directory; errors carry line numbers.
struct RunConfig {
  // model block
  std::string model_kind = "brownian";
  double model_A = 1.0;
  double model_alpha = 1.5;
  double model_c = 1.0;
  double model_jump_rate = 0.0;
  std::string model_jump_kind = "two_point";
  double model_jump_param = 1.0;
  double kill_rate = 0.5;

  // mass block
  std::string mass_name = "inv_linear";
  double mass_param = 1.0;
  std::string mass_csv;
  double mass_decay_exponent = 2.0;

  // grid / spectrum
  std::optional<double> grid_L;
  std::optional<int> grid_N;
  int spectrum_k = 40;

  // monte carlo
  long mc_paths = 200000;
  double mc_dt = 1e-2;
  std::uint64_t mc_seed = 1;

  // mcmc
  long mcmc_sweeps = 1000000;
  int mcmc_chains = 4;
  int mcmc_ring_n = 64;

  // partition / small-r
  int zn_max = 64;
  std::vector<double> smallr_list = {1e-2, 1e-3, 1e-4};

  bool cache = true;

  std::map<std::string, std::string> raw;

  LevyModel make_model() const;
  MassFunction make_mass() const;
  Grid make_grid(const MassFunction& mass) const;
  /// Canonical text used for hashing and the manifest.
  std::string canonical() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

}  // namespace levyspec

#endif
