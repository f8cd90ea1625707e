#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meshnet {

// Runs one CLI invocation (arguments without the program name) against the
// given streams. Returns the process exit code: 0 success, 1 data error,
// 2 usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

}  // namespace meshnet
