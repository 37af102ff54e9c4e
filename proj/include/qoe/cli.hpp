#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qoe::cli {

/// Runs one CLI invocation. args excludes the program name. Returns the
/// process exit status; all output goes to the given streams.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qoe::cli
