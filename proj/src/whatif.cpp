#include "laggraph/whatif.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace laggraph {

std::string_view to_string(LoosenLevel level) {
    switch (level) {
        case LoosenLevel::None: return "none";
        case LoosenLevel::Patch: return "patch";
        case LoosenLevel::PatchAndMinor: return "minor";
    }
    return "?";
}

LoosenLevel parse_loosen_level(std::string_view text) {
    if (text == "none") return LoosenLevel::None;
    if (text == "patch") return LoosenLevel::Patch;
    if (text == "minor") return LoosenLevel::PatchAndMinor;
    throw std::invalid_argument("unknown loosening level \"" + std::string(text) + "\" (none|patch|minor)");
}

namespace {

using CompatKey = std::pair<std::uint64_t, std::uint64_t>;

CompatKey key_of(const semver::Version& v, LoosenLevel level) {
    return level == LoosenLevel::Patch ? CompatKey{v.major, v.minor} : CompatKey{v.major, 0};
}

// Loosened installable set, version-ascending.
std::vector<ReleaseId> loosened_set(const Dependency& d, Timestamp t, LoosenLevel level, const PackageIndex& idx) {
    auto base = installable(d, t, idx);
    if (level == LoosenLevel::None || base.empty()) return base;

    // Lowest installable version per compatibility class.
    std::map<CompatKey, ReleaseId> lowest;
    for (ReleaseId id : base) lowest.try_emplace(key_of(idx.release(id).version, level), id);

    std::vector<ReleaseId> out;
    std::size_t next_base = 0;
    for (ReleaseId id : idx.by_version(d.target)) {
        if (next_base < base.size() && base[next_base] == id) {
            out.push_back(id);
            ++next_base;
            continue;
        }
        const Release& candidate = idx.release(id);
        if (candidate.date > t || candidate.version.is_prerelease()) continue;
        auto it = lowest.find(key_of(candidate.version, level));
        if (it != lowest.end() && idx.version_rank(id) > idx.version_rank(it->second)) out.push_back(id);
    }
    return out;
}

}  // namespace

std::vector<ReleaseId> installable_loosened(const Dependency& d, Timestamp t, LoosenLevel level,
                                            const PackageIndex& idx) {
    return loosened_set(d, t, level, idx);
}

Duration dep_lag_loosened(const Dependency& d, Timestamp t, LoosenLevel level, const PackageIndex& idx) {
    if (level == LoosenLevel::None) return dep_lag(d, t, idx);
    auto set = loosened_set(d, t, level, idx);
    std::optional<std::size_t> max_rank;
    if (!set.empty()) max_rank = idx.version_rank(set.back());
    std::optional<Timestamp> earliest;
    for (ReleaseId id : idx.available(d.target, t)) {
        if (max_rank && idx.version_rank(id) <= *max_rank) continue;
        const Timestamp date = idx.release(id).date;
        if (!earliest || date < *earliest) earliest = date;
    }
    return earliest ? t - *earliest : Duration{0};
}

Duration lag_loosened(const Release& r, Timestamp t, LoosenLevel level, const PackageIndex& idx) {
    if (level == LoosenLevel::None) return release_lag(r, t, idx);
    Duration worst{0};
    for (const auto& d : r.deps) worst = std::max(worst, dep_lag_loosened(d, t, level, idx));
    return worst;
}

}  // namespace laggraph
