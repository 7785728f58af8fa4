#ifndef DMKIT_TOOLS_CLI_HPP
#define DMKIT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dmkit::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kData = 3,
};

/// Runs one command line. `args` excludes the program name. Reports go to
/// `out` unless redirected with --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmkit::cli

#endif
