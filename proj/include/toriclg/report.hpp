#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toriclg {

/// Runs one CLI command (arguments without the program name). The report goes
/// to `out`, diagnostics to `err`. Returns 0 when every verdict passes, 1 when
/// one fails or a computation breaks down, 2 on usage or input errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toriclg
