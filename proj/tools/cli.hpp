#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvfun::cli {

/// Exit codes: 0 success, 1 some verdict violated, 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvfun::cli
