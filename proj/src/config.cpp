#include "levyspec/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "levyspec/errors.hpp"

namespace levyspec {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects an integer, got '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& v, const std::string& key,
                            int line) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, key, line));
  }
  if (out.empty())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects a comma-separated list");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ": line " + std::to_string(lineno) +
                        ": expected key=value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(origin + ": line " + std::to_string(lineno) +
                        ": empty key or value");
    cfg.raw[key] = val;

    if (key == "model.kind") cfg.model_kind = val;
    else if (key == "model.A") cfg.model_A = to_double(val, key, lineno);
    else if (key == "model.alpha") cfg.model_alpha = to_double(val, key, lineno);
    else if (key == "model.c") cfg.model_c = to_double(val, key, lineno);
    else if (key == "model.jump_rate") cfg.model_jump_rate = to_double(val, key, lineno);
    else if (key == "model.jump_kind") cfg.model_jump_kind = val;
    else if (key == "model.jump_param") cfg.model_jump_param = to_double(val, key, lineno);
    else if (key == "kill_rate") cfg.kill_rate = to_double(val, key, lineno);
    else if (key == "mass.name") cfg.mass_name = val;
    else if (key == "mass.param") cfg.mass_param = to_double(val, key, lineno);
    else if (key == "mass.csv") cfg.mass_csv = val;
    else if (key == "mass.decay_exponent") cfg.mass_decay_exponent = to_double(val, key, lineno);
    else if (key == "grid.L") cfg.grid_L = to_double(val, key, lineno);
    else if (key == "grid.N") cfg.grid_N = static_cast<int>(to_long(val, key, lineno));
    else if (key == "spectrum.k") cfg.spectrum_k = static_cast<int>(to_long(val, key, lineno));
    else if (key == "mc.paths") cfg.mc_paths = to_long(val, key, lineno);
    else if (key == "mc.dt") cfg.mc_dt = to_double(val, key, lineno);
    else if (key == "mc.seed") cfg.mc_seed = static_cast<std::uint64_t>(to_long(val, key, lineno));
    else if (key == "mcmc.sweeps") cfg.mcmc_sweeps = to_long(val, key, lineno);
    else if (key == "mcmc.chains") cfg.mcmc_chains = static_cast<int>(to_long(val, key, lineno));
    else if (key == "mcmc.ring_n") cfg.mcmc_ring_n = static_cast<int>(to_long(val, key, lineno));
    else if (key == "zn.max") cfg.zn_max = static_cast<int>(to_long(val, key, lineno));
    else if (key == "smallr.list") cfg.smallr_list = to_list(val, key, lineno);
    else if (key == "cache") cfg.cache = val == "1" || val == "true" || val == "on";
    else
      throw ConfigError(origin + ": line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
  }

  if (!(cfg.kill_rate > 0.0))
    throw ConfigError(origin + ": kill_rate must be positive");
  if (cfg.grid_N && (*cfg.grid_N < 3 || *cfg.grid_N % 2 == 0))
    throw ConfigError(origin + ": grid.N must be odd and >= 3");
  if (cfg.spectrum_k < 2)
    throw ConfigError(origin + ": spectrum.k must be >= 2");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

LevyModel RunConfig::make_model() const {
  if (model_kind == "brownian") return LevyModel::brownian(model_A);
  if (model_kind == "stable")
    return LevyModel::symmetric_stable(model_alpha, model_c);
  if (model_kind == "brownian_jumps") {
    JumpKind jk;
    if (model_jump_kind == "two_point") jk = JumpKind::TwoPoint;
    else if (model_jump_kind == "gaussian") jk = JumpKind::Gaussian;
    else throw ConfigError("unknown model.jump_kind '" + model_jump_kind + "'");
    return LevyModel::brownian_with_jumps(model_A, model_jump_rate, jk,
                                          model_jump_param);
  }
  throw ConfigError("unknown model.kind '" + model_kind + "'");
}

MassFunction RunConfig::make_mass() const {
  if (!mass_csv.empty())
    return MassFunction::from_csv(mass_csv, mass_decay_exponent);
  return MassFunction::builtin(mass_name, mass_param);
}

Grid RunConfig::make_grid(const MassFunction& mass) const {
  double L = grid_L.value_or(default_halfwidth(mass));
  int N = grid_N.value_or(mass.in_l1() ? 2001 : 3001);
  return Grid(L, N);
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : raw) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace levyspec
