#ifndef LEVYSPEC_CLI_HPP
#define LEVYSPEC_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levyspec/config.hpp"

namespace levyspec::cli {

inline constexpr const char* kVersion = "0.1.0";

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;
inline constexpr int kVerifyFailed = 4;

struct CmdOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool tamper_kernel = false;  // verification self-test hook
};

int cmd_potential(const RunConfig& cfg, const CmdOptions& opt);
int cmd_spectrum(const RunConfig& cfg, const CmdOptions& opt);
int cmd_partition(const RunConfig& cfg, const CmdOptions& opt);
int cmd_moments(const RunConfig& cfg, const CmdOptions& opt);
int cmd_simulate(const RunConfig& cfg, const CmdOptions& opt);
int cmd_gibbs(const RunConfig& cfg, const CmdOptions& opt);
int cmd_smallr(const RunConfig& cfg, const CmdOptions& opt);
int cmd_verify(const RunConfig& cfg, const CmdOptions& opt);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};
struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.skipped && !c.pass) return false;
    return true;
  }
};
VerifyReport run_verify_battery(const RunConfig& cfg, const CmdOptions& opt);

/// Full command-line entry point (subcommand dispatch + error mapping).
int run_main(int argc, char** argv);

}  // namespace levyspec::cli

#endif
