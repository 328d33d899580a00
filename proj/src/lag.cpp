#include "laggraph/lag.hpp"

#include <algorithm>

namespace laggraph {

namespace {

void check_target(const Dependency& d, const PackageIndex& idx) {
    if (d.target >= idx.package_count()) {
        throw std::out_of_range("dependency targets unknown package id " + std::to_string(d.target));
    }
}

bool is_missed(ReleaseId candidate, const Resolution& res, const PackageIndex& idx) {
    if (!res.max_installable) return true;
    return idx.version_rank(candidate) > idx.version_rank(*res.max_installable);
}

}  // namespace

Resolution resolve(const Dependency& d, Timestamp t, const PackageIndex& idx) {
    check_target(d, idx);
    Resolution res;
    auto versions = idx.by_version(d.target);
    bool any_available = false;
    for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
        const Release& candidate = idx.release(*it);
        if (candidate.date > t) continue;
        any_available = true;
        if (semver::satisfies(candidate.version, *d.constraint)) {
            res.max_installable = *it;
            break;
        }
        if (!res.earliest_missed || candidate.date < *res.earliest_missed) res.earliest_missed = candidate.date;
    }
    res.unresolved = !any_available;
    return res;
}

std::vector<ReleaseId> installable(const Dependency& d, Timestamp t, const PackageIndex& idx) {
    check_target(d, idx);
    std::vector<ReleaseId> out;
    for (ReleaseId id : idx.by_version(d.target)) {
        const Release& candidate = idx.release(id);
        if (candidate.date <= t && semver::satisfies(candidate.version, *d.constraint)) out.push_back(id);
    }
    return out;
}

std::vector<ReleaseId> missed(const Dependency& d, Timestamp t, const PackageIndex& idx) {
    Resolution res = resolve(d, t, idx);
    std::vector<ReleaseId> out;
    for (ReleaseId id : idx.by_version(d.target)) {
        if (idx.release(id).date <= t && is_missed(id, res, idx)) out.push_back(id);
    }
    return out;
}

Duration dep_lag(const Dependency& d, Timestamp t, const PackageIndex& idx) { return resolve(d, t, idx).lag(t); }

Duration release_lag(const Release& r, Timestamp t, const PackageIndex& idx) {
    Duration worst{0};
    for (const auto& d : r.deps) worst = std::max(worst, dep_lag(d, t, idx));
    return worst;
}

std::optional<Timestamp> next_release_date(ReleaseId r, const PackageIndex& idx, bool observation_end) {
    if (auto next = idx.next_by_date(r)) return idx.release(*next).date;
    if (observation_end) return idx.latest();
    return std::nullopt;
}

LifespanLags lifespan_lags(ReleaseId r, const PackageIndex& idx, bool observation_end) {
    const Release& rel = idx.release(r);
    LifespanLags out;
    out.at_release = release_lag(rel, rel.date, idx);
    if (auto next = next_release_date(r, idx, observation_end)) out.at_next = release_lag(rel, *next, idx);
    return out;
}

namespace {

// Calls fn(dependency, new target release, missed at the next date) for every
// target release published during (r.date, next].
template <typename Fn>
void for_each_new_target_release(const Release& rel, Timestamp next, const PackageIndex& idx, Fn&& fn) {
    for (const auto& d : rel.deps) {
        auto before = idx.available(d.target, rel.date);
        auto after = idx.available(d.target, next);
        if (after.size() == before.size()) continue;
        Resolution res = resolve(d, next, idx);
        for (ReleaseId id : after.subspan(before.size())) fn(d, id, is_missed(id, res, idx));
    }
}

}  // namespace

std::optional<LifespanEvents> lifespan_events(ReleaseId r, const PackageIndex& idx, bool observation_end) {
    auto next = next_release_date(r, idx, observation_end);
    if (!next) return std::nullopt;
    LifespanEvents events;
    for_each_new_target_release(idx.release(r), *next, idx, [&](const Dependency&, ReleaseId, bool was_missed) {
        events.target_updated = true;
        events.update_missed = events.update_missed || was_missed;
    });
    return events;
}

std::optional<std::vector<semver::ReleaseType>> missed_types(ReleaseId r, const PackageIndex& idx,
                                                             bool observation_end) {
    auto next = next_release_date(r, idx, observation_end);
    if (!next) return std::nullopt;
    std::vector<semver::ReleaseType> types;
    for_each_new_target_release(idx.release(r), *next, idx, [&](const Dependency&, ReleaseId id, bool was_missed) {
        if (was_missed) types.push_back(idx.release(id).type);
    });
    std::sort(types.begin(), types.end());
    return types;
}

std::string_view to_string(LagDirection direction) {
    switch (direction) {
        case LagDirection::Higher: return "HIGHER";
        case LagDirection::Same: return "SAME";
        case LagDirection::Lower: return "LOWER";
    }
    return "?";
}

std::optional<LagChange> lag_change(ReleaseId r, const PackageIndex& idx) {
    auto prev = idx.prev_by_date(r);
    if (!prev) return std::nullopt;
    const Release& rel = idx.release(r);
    LagChange change;
    change.release = r;
    change.magnitude = release_lag(rel, rel.date, idx) - release_lag(idx.release(*prev), rel.date, idx);
    change.direction = change.magnitude > Duration{0}   ? LagDirection::Higher
                       : change.magnitude < Duration{0} ? LagDirection::Lower
                                                        : LagDirection::Same;
    return change;
}

std::optional<std::vector<semver::ReleaseType>> adoption(ReleaseId r, const PackageIndex& idx) {
    auto prev = idx.prev_by_date(r);
    if (!prev) return std::nullopt;
    const Release& rel = idx.release(r);
    const Release& before = idx.release(*prev);
    std::vector<semver::ReleaseType> types;
    for (const auto& d : rel.deps) {
        auto match = std::find_if(before.deps.begin(), before.deps.end(),
                                  [&](const Dependency& old) { return old.target == d.target; });
        if (match == before.deps.end()) continue;
        auto was_missed = missed(*match, rel.date, idx);
        auto now_installable = installable(d, rel.date, idx);
        // Both lists are version-ascending.
        std::vector<ReleaseId> adopted;
        std::set_intersection(was_missed.begin(), was_missed.end(), now_installable.begin(), now_installable.end(),
                              std::back_inserter(adopted), [&](ReleaseId a, ReleaseId b) {
                                  return idx.version_rank(a) < idx.version_rank(b);
                              });
        for (ReleaseId id : adopted) types.push_back(idx.release(id).type);
    }
    std::sort(types.begin(), types.end());
    return types;
}

MissedSummary missed_summary(ReleaseId r, Timestamp t, const PackageIndex& idx) {
    const Release& rel = idx.release(r);
    MissedSummary summary;
    summary.release = r;
    summary.evaluated_at = t;
    for (const auto& d : rel.deps) {
        auto& entries = summary.per_dependency.emplace_back();
        for (ReleaseId id : missed(d, t, idx)) entries.push_back({id, idx.release(id).type});
    }
    return summary;
}

std::vector<LagSample> lifespan_samples(ReleaseId r, const PackageIndex& idx, bool observation_end) {
    const Release& rel = idx.release(r);
    std::vector<LagSample> samples;
    auto sample_at = [&](Timestamp t, SampleContext context) {
        Duration worst{0};
        bool any_unresolved = false;
        for (std::size_t i = 0; i < rel.deps.size(); ++i) {
            Resolution res = resolve(rel.deps[i], t, idx);
            Duration lag = res.lag(t);
            worst = std::max(worst, lag);
            any_unresolved = any_unresolved || res.unresolved;
            samples.push_back({r, i, t, lag, context, res.unresolved});
        }
        samples.push_back({r, std::nullopt, t, worst, context, any_unresolved});
    };
    sample_at(rel.date, SampleContext::AtRelease);
    if (auto next = next_release_date(r, idx, observation_end)) sample_at(*next, SampleContext::AtNextRelease);
    return samples;
}

}  // namespace laggraph
