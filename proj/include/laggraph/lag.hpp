#pragma once

// Technical lag of dependencies and releases.
//
// For a dependency d evaluated at time t:
//   installable(d, t)  available releases of d.target satisfying d.constraint
//   missed(d, t)       available releases version-greater than the highest
//                      installable one (all available ones if none is installable)
//   dep_lag(d, t)      t minus the earliest date in missed(d, t), or zero
// and the lag of a release is the maximum over its dependencies.

#include <optional>
#include <vector>

#include "laggraph/index.hpp"
#include "laggraph/time.hpp"

namespace laggraph {

/// Everything dep_lag needs, from one descending scan of the target's versions.
struct Resolution {
    std::optional<ReleaseId> max_installable;
    std::optional<Timestamp> earliest_missed;
    /// No release of the target is available at the evaluation time.
    bool unresolved = false;

    Duration lag(Timestamp t) const { return earliest_missed ? t - *earliest_missed : Duration{0}; }
};

Resolution resolve(const Dependency& d, Timestamp t, const PackageIndex& idx);

/// Version-ascending.
std::vector<ReleaseId> installable(const Dependency& d, Timestamp t, const PackageIndex& idx);
/// Version-ascending.
std::vector<ReleaseId> missed(const Dependency& d, Timestamp t, const PackageIndex& idx);

Duration dep_lag(const Dependency& d, Timestamp t, const PackageIndex& idx);
Duration release_lag(const Release& r, Timestamp t, const PackageIndex& idx);

/// Date of the next release of the same package. With `observation_end`, the
/// last release of a package uses the latest date in the corpus instead.
std::optional<Timestamp> next_release_date(ReleaseId r, const PackageIndex& idx, bool observation_end = false);

struct LifespanLags {
    Duration at_release{0};
    std::optional<Duration> at_next;
};

LifespanLags lifespan_lags(ReleaseId r, const PackageIndex& idx, bool observation_end = false);

struct LifespanEvents {
    /// Some dependency target published a release during the lifespan.
    bool target_updated = false;
    /// One of those new releases is missed at the next release date.
    bool update_missed = false;
};

/// nullopt when the release has no next release.
std::optional<LifespanEvents> lifespan_events(ReleaseId r, const PackageIndex& idx, bool observation_end = false);

/// Release types of target releases newly missed during the lifespan: in
/// missed(d, next date) and published in (r.date, next date]. Sorted.
std::optional<std::vector<semver::ReleaseType>> missed_types(ReleaseId r, const PackageIndex& idx,
                                                             bool observation_end = false);

enum class LagDirection { Higher, Same, Lower };

std::string_view to_string(LagDirection direction);

struct LagChange {
    ReleaseId release = 0;
    LagDirection direction = LagDirection::Same;
    /// release_lag(r, r.date) - release_lag(prev_by_date(r), r.date)
    Duration magnitude{0};
};

/// nullopt for the first release of a package.
std::optional<LagChange> lag_change(ReleaseId r, const PackageIndex& idx);

/// Types of target releases that were missed by the predecessor's dependency
/// at r.date and are installable under r's dependency on the same target.
/// nullopt for the first release of a package. Sorted.
std::optional<std::vector<semver::ReleaseType>> adoption(ReleaseId r, const PackageIndex& idx);

struct MissedSummary {
    ReleaseId release = 0;
    Timestamp evaluated_at;
    struct Entry {
        ReleaseId target_release;
        semver::ReleaseType type;
    };
    /// Parallel to the release's dependencies.
    std::vector<std::vector<Entry>> per_dependency;
};

MissedSummary missed_summary(ReleaseId r, Timestamp t, const PackageIndex& idx);

enum class SampleContext { AtRelease, AtNextRelease };

struct LagSample {
    ReleaseId release = 0;
    /// Index into the release's dependencies; nullopt for the release itself.
    std::optional<std::size_t> dependency;
    Timestamp time_point;
    Duration lag{0};
    SampleContext context = SampleContext::AtRelease;
    bool unresolved = false;
};

/// Release-level and dependency-level samples at r.date and, when it exists,
/// at the next release date.
std::vector<LagSample> lifespan_samples(ReleaseId r, const PackageIndex& idx, bool observation_end = false);

}  // namespace laggraph
