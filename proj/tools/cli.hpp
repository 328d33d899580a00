#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace laggraph::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace laggraph::cli
