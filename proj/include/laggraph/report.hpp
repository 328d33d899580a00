#pragma once

// Monthly and grouped aggregates of the lag metrics.
//
// Releases are bucketed on the UTC calendar month of their own date. Unless
// `observation_end` is set, analyses that look at a release's lifespan skip
// the last release of each package. Groups without any population are not
// emitted. Durations are reported in days.

#include <ostream>
#include <string>
#include <vector>

#include "laggraph/index.hpp"
#include "laggraph/whatif.hpp"

namespace laggraph::report {

struct SeriesRow {
    std::string table;
    std::string group;  // "YYYY-MM" for monthly series
    std::string metric;
    double value = 0;
    std::size_t population = 0;
};

struct MonthlySeries {
    std::vector<SeriesRow> rows;

    /// Values of one (table, metric) in group order.
    std::vector<SeriesRow> select(std::string_view table, std::string_view metric) const;
};

struct DistributionRow {
    std::string table;
    std::string group;
    std::size_t count = 0;
    double p25 = 0;
    double median = 0;
    double mean = 0;
    double p75 = 0;
};

struct Tables {
    MonthlySeries series;
    std::vector<DistributionRow> distributions;
};

struct Options {
    /// Use the latest corpus date as the "next release" date of the last
    /// release of each package instead of skipping it.
    bool observation_end = false;
    /// 0 = LAGGRAPH_THREADS or hardware concurrency.
    unsigned workers = 0;
};

/// Quartiles use linear interpolation between closest ranks.
DistributionRow summarize(std::string table, std::string group, std::vector<double> values);

/// Tables "lagging_proportion" (releases, dependencies) and "lifespan_updates"
/// (target_update_available, target_update_missed, missed_over_available).
MonthlySeries rq1_proportions(const PackageIndex& idx, const Options& opts = {});

/// "lag_at_next_release_monthly" over positive lags at the next release date;
/// "lag_at_release_yearly_by_type" over positive lags at the release date,
/// grouped "YYYY/TYPE".
std::vector<DistributionRow> rq2_distributions(const PackageIndex& idx, const Options& opts = {});

/// Series "update_type_proportion" (type of the next release); distributions
/// "lifespan_monthly" and "lifespan_by_type_pair" ("TYPE->NEXT_TYPE").
/// Lifespans always end at an actual next release.
Tables rq3_update_stats(const PackageIndex& idx, const Options& opts = {});

/// Distribution "lag_growth_monthly" of positive growth over the lifespan;
/// series "newly_missed_type_proportion".
Tables rq4_growth(const PackageIndex& idx, const Options& opts = {});

/// Series "lag_change_proportion" (monthly), "lag_change_by_type" and
/// "adoption_by_type" (grouped by the release's own type).
Tables rq5_changes(const PackageIndex& idx, const Options& opts = {});

/// Table "whatif_lagging_releases": metric "baseline" (equal to rq1's release
/// proportion) plus one metric per requested level, named by to_string(level).
MonthlySeries rq6_whatif(const PackageIndex& idx, std::span<const LoosenLevel> levels, const Options& opts = {});
MonthlySeries rq6_whatif(const PackageIndex& idx, LoosenLevel level, const Options& opts = {});

/// Long format "table,group,metric,value,count"; distribution rows expand to
/// metrics p25, median, mean, p75. Values use fixed 6-decimal notation.
void write_csv(std::ostream& out, const Tables& tables);

}  // namespace laggraph::report
