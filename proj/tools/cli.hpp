#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "stirred/config.hpp"

namespace stirred::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  ///< ran to completion, but a check failed
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

/// Names of the subcommands, in help order.
std::vector<std::string> subcommands();

/// Key schema of one subcommand (global keys excluded). Throws ConfigError
/// for an unknown subcommand.
std::vector<io::KeySpec> schema(const std::string& subcommand);

/// Parse argv, run the subcommand and return the process exit code.
/// Messages go to `out` and `err`; files go to output_dir.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stirred::cli
