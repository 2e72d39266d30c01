#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ntcp::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::string> format;
  std::optional<std::string> frame;
  std::optional<long> seed;  // reserved
};

int cmd_derive(const CommonFlags& flags, const std::string& schedule_path);
int cmd_simulate(const CommonFlags& flags);
int cmd_sweep(const CommonFlags& flags, const std::vector<std::string>& axes);
int cmd_verify(const CommonFlags& flags, std::optional<double> tolerance);

}  // namespace ntcp::cli
