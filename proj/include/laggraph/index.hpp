#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "laggraph/corpus.hpp"
#include "laggraph/semver.hpp"
#include "laggraph/time.hpp"

namespace laggraph {

using PackageId = std::uint32_t;
using ReleaseId = std::uint32_t;

struct Dependency {
    PackageId target = 0;
    std::shared_ptr<const semver::Constraint> constraint;

    static Dependency make(PackageId target, std::string_view constraint) {
        return {target, std::make_shared<const semver::Constraint>(semver::parse_constraint(constraint))};
    }
};

struct Release {
    PackageId package = 0;
    semver::Version version;
    Timestamp date;
    std::vector<Dependency> deps;
    semver::ReleaseType type = semver::ReleaseType::Initial;
};

/// Immutable, time-indexed view of a filtered corpus.
///
/// Packages are numbered in lexicographic name order and releases grouped by
/// package in date order, so ReleaseIds are stable for a given input. Within a
/// package the date order breaks timestamp ties by version. All queries are
/// const and safe to call concurrently once built.
class PackageIndex {
public:
    /// Throws semver::ParseError for an unparseable version or constraint,
    /// std::invalid_argument for an unknown dependency target or two releases
    /// of one package with equal precedence.
    static PackageIndex build(std::span<const RawRecord> records);

    std::size_t package_count() const noexcept { return names_.size(); }
    std::size_t release_count() const noexcept { return releases_.size(); }

    const std::string& package_name(PackageId p) const { return names_.at(p); }
    std::optional<PackageId> find_package(std::string_view name) const;
    std::optional<ReleaseId> find_release(std::string_view package, std::string_view version) const;

    const Release& release(ReleaseId r) const { return releases_.at(r); }
    std::span<const Release> releases() const noexcept { return releases_; }

    /// Releases of `p` in date order / version order.
    std::span<const ReleaseId> by_date(PackageId p) const;
    std::span<const ReleaseId> by_version(PackageId p) const;

    /// Releases of `p` dated at or before `t`, in date order.
    std::span<const ReleaseId> available(PackageId p, Timestamp t) const;

    std::optional<ReleaseId> prev_by_date(ReleaseId r) const;
    std::optional<ReleaseId> next_by_date(ReleaseId r) const;
    std::optional<ReleaseId> prev_by_version(ReleaseId r) const;
    std::optional<ReleaseId> next_by_version(ReleaseId r) const;

    std::size_t version_rank(ReleaseId r) const { return version_rank_.at(r); }

    Timestamp earliest() const noexcept { return earliest_; }
    Timestamp latest() const noexcept { return latest_; }

    std::string label(ReleaseId r) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, PackageId> ids_;
    std::vector<Release> releases_;
    // Per package, offsets into date_order_/version_order_.
    std::vector<std::uint32_t> offsets_;
    std::vector<ReleaseId> date_order_;
    std::vector<ReleaseId> version_order_;
    std::vector<std::uint32_t> date_rank_;
    std::vector<std::uint32_t> version_rank_;
    Timestamp earliest_{};
    Timestamp latest_{};
};

}  // namespace laggraph
