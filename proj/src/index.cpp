#include "laggraph/index.hpp"

#include <algorithm>
#include <numeric>

namespace laggraph {

PackageIndex PackageIndex::build(std::span<const RawRecord> records) {
    PackageIndex idx;

    for (const auto& r : records) idx.names_.push_back(r.package);
    std::sort(idx.names_.begin(), idx.names_.end());
    idx.names_.erase(std::unique(idx.names_.begin(), idx.names_.end()), idx.names_.end());
    for (PackageId p = 0; p < idx.names_.size(); ++p) idx.ids_.emplace(idx.names_[p], p);

    std::unordered_map<std::string, std::shared_ptr<const semver::Constraint>> constraints;
    auto intern = [&](const std::string& text) {
        auto it = constraints.find(text);
        if (it == constraints.end()) {
            it = constraints.emplace(text, std::make_shared<const semver::Constraint>(semver::parse_constraint(text)))
                     .first;
        }
        return it->second;
    };

    std::vector<Release> staged;
    staged.reserve(records.size());
    for (const auto& r : records) {
        Release rel;
        rel.package = idx.ids_.at(r.package);
        rel.version = semver::parse_version(r.version);
        rel.date = r.date;
        rel.deps.reserve(r.dependencies.size());
        for (const auto& d : r.dependencies) {
            auto target = idx.ids_.find(d.target);
            if (target == idx.ids_.end()) {
                throw std::invalid_argument("release " + r.package + "@" + r.version +
                                            " depends on unknown package " + d.target);
            }
            rel.deps.push_back(Dependency{target->second, intern(d.constraint)});
        }
        staged.push_back(std::move(rel));
    }

    // Releases are stored grouped by package, in date order (ties by version).
    std::vector<std::size_t> order(staged.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Release& x = staged[a];
        const Release& y = staged[b];
        if (x.package != y.package) return x.package < y.package;
        if (x.date != y.date) return x.date < y.date;
        return semver::compare(x.version, y.version) < 0;
    });
    idx.releases_.reserve(staged.size());
    for (std::size_t i : order) idx.releases_.push_back(std::move(staged[i]));

    const std::size_t n = idx.releases_.size();
    idx.offsets_.assign(idx.names_.size() + 1, 0);
    for (const auto& r : idx.releases_) ++idx.offsets_[r.package + 1];
    std::partial_sum(idx.offsets_.begin(), idx.offsets_.end(), idx.offsets_.begin());

    idx.date_order_.resize(n);
    std::iota(idx.date_order_.begin(), idx.date_order_.end(), ReleaseId{0});
    idx.version_order_ = idx.date_order_;
    idx.date_rank_.resize(n);
    idx.version_rank_.resize(n);

    for (PackageId p = 0; p < idx.names_.size(); ++p) {
        auto first = idx.version_order_.begin() + idx.offsets_[p];
        auto last = idx.version_order_.begin() + idx.offsets_[p + 1];
        std::sort(first, last, [&](ReleaseId a, ReleaseId b) {
            return semver::compare(idx.releases_[a].version, idx.releases_[b].version) < 0;
        });
        for (auto it = first; it != last; ++it) {
            if (it != first && idx.releases_[*(it - 1)].version == idx.releases_[*it].version) {
                throw std::invalid_argument("package " + idx.names_[p] + " has two releases with version " +
                                            idx.releases_[*it].version.to_string());
            }
            auto rank = static_cast<std::uint32_t>(it - first);
            idx.version_rank_[*it] = rank;
            Release& rel = idx.releases_[*it];
            rel.type = it == first ? semver::ReleaseType::Initial
                                   : semver::classify(rel.version, idx.releases_[*(it - 1)].version);
        }
        for (std::uint32_t i = idx.offsets_[p]; i < idx.offsets_[p + 1]; ++i) idx.date_rank_[i] = i - idx.offsets_[p];
    }

    if (n > 0) {
        auto [lo, hi] = std::minmax_element(idx.releases_.begin(), idx.releases_.end(),
                                            [](const Release& a, const Release& b) { return a.date < b.date; });
        idx.earliest_ = lo->date;
        idx.latest_ = hi->date;
    }
    return idx;
}

std::optional<PackageId> PackageIndex::find_package(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<ReleaseId> PackageIndex::find_release(std::string_view package, std::string_view version) const {
    auto p = find_package(package);
    if (!p) return std::nullopt;
    semver::Version v;
    try {
        v = semver::parse_version(version);
    } catch (const semver::ParseError&) {
        return std::nullopt;
    }
    auto versions = by_version(*p);
    auto it = std::lower_bound(versions.begin(), versions.end(), v, [&](ReleaseId id, const semver::Version& x) {
        return semver::compare(releases_[id].version, x) < 0;
    });
    if (it != versions.end() && releases_[*it].version == v) return *it;
    return std::nullopt;
}

std::span<const ReleaseId> PackageIndex::by_date(PackageId p) const {
    if (p >= names_.size()) throw std::out_of_range("unknown package id " + std::to_string(p));
    return std::span<const ReleaseId>(date_order_).subspan(offsets_[p], offsets_[p + 1] - offsets_[p]);
}

std::span<const ReleaseId> PackageIndex::by_version(PackageId p) const {
    if (p >= names_.size()) throw std::out_of_range("unknown package id " + std::to_string(p));
    return std::span<const ReleaseId>(version_order_).subspan(offsets_[p], offsets_[p + 1] - offsets_[p]);
}

std::span<const ReleaseId> PackageIndex::available(PackageId p, Timestamp t) const {
    auto all = by_date(p);
    auto end = std::upper_bound(all.begin(), all.end(), t,
                                [&](Timestamp x, ReleaseId id) { return x < releases_[id].date; });
    return all.first(static_cast<std::size_t>(end - all.begin()));
}

std::optional<ReleaseId> PackageIndex::prev_by_date(ReleaseId r) const {
    if (date_rank_.at(r) == 0) return std::nullopt;
    return r - 1;
}

std::optional<ReleaseId> PackageIndex::next_by_date(ReleaseId r) const {
    if (r + 1 >= releases_.size() || releases_[r + 1].package != releases_[r].package) return std::nullopt;
    return r + 1;
}

std::optional<ReleaseId> PackageIndex::prev_by_version(ReleaseId r) const {
    std::uint32_t rank = version_rank_.at(r);
    if (rank == 0) return std::nullopt;
    return version_order_[offsets_[releases_[r].package] + rank - 1];
}

std::optional<ReleaseId> PackageIndex::next_by_version(ReleaseId r) const {
    std::uint32_t rank = version_rank_.at(r);
    PackageId p = releases_[r].package;
    if (offsets_[p] + rank + 1 >= offsets_[p + 1]) return std::nullopt;
    return version_order_[offsets_[p] + rank + 1];
}

std::string PackageIndex::label(ReleaseId r) const {
    const Release& rel = release(r);
    return names_[rel.package] + "@" + rel.version.to_string();
}

}  // namespace laggraph
