#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcf::cli {

/// Runs the command line front end. Returns 0 when every check passes, 1 when a
/// check is violated, 2 on usage or configuration errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcf::cli
