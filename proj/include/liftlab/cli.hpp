#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace liftlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;

/// Flat key = value file; '#' starts a comment. Keys are long option names
/// without dashes.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Runs one subcommand. `args` excludes the program name. Precedence is
/// flags > --config file > defaults; LIFTLAB_THREADS overrides the default
/// thread count.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liftlab::cli
