#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fostat::cli {

/// Run one command. Exit codes: 0 success, 1 domain/input error, 2 usage
/// error. Kept in the library so tests can drive the CLI in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fostat::cli
