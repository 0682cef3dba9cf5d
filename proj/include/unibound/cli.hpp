#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unibound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Replaces `--config path` by the tokens its JSON object describes:
/// "command" (string or array) supplies subcommand words when none precede
/// the flag, every other key becomes `--key value` (arrays comma-joined,
/// true booleans become bare flags, false ones are dropped).
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace unibound::cli
