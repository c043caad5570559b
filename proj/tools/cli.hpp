#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nck::cli {

/// Runs the experiment CLI. Returns 0 on success, 1 on validation errors
/// (bad flags, malformed input, caps) and 2 on numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nck::cli
