#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qaction {

/// Runs one CLI invocation (args exclude the program name). Returns the
/// process exit code: 0 success, 1 configuration/usage error, 2 partial
/// numerical failure.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qaction
