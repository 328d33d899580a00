#pragma once

// Counterfactual lag under loosened constraints.
//
// Loosening extends installable(d, t) with every available, non-pre-release
// version of the target that is greater than some installable version and
// compatible with it: same (major, minor) at Patch level, same major at
// PatchAndMinor level. 0.x versions follow the same component rule.

#include <string_view>
#include <vector>

#include "laggraph/lag.hpp"

namespace laggraph {

enum class LoosenLevel { None, Patch, PatchAndMinor };

/// "none" | "patch" | "minor"
std::string_view to_string(LoosenLevel level);
LoosenLevel parse_loosen_level(std::string_view text);

/// Version-ascending. Level None returns installable(d, t) unchanged.
std::vector<ReleaseId> installable_loosened(const Dependency& d, Timestamp t, LoosenLevel level,
                                            const PackageIndex& idx);

Duration dep_lag_loosened(const Dependency& d, Timestamp t, LoosenLevel level, const PackageIndex& idx);
Duration lag_loosened(const Release& r, Timestamp t, LoosenLevel level, const PackageIndex& idx);

}  // namespace laggraph
