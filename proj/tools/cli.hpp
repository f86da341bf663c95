#ifndef PFIBER_TOOLS_CLI_HPP
#define PFIBER_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace pfiber::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. The payload goes to
/// `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pfiber::cli

#endif
