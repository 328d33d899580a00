#include "laggraph/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>

#include "laggraph/lag.hpp"
#include "laggraph/parallel.hpp"

namespace laggraph::report {

namespace {

using semver::ReleaseType;

constexpr std::array<ReleaseType, 3> kUpdateTypes = {ReleaseType::Major, ReleaseType::Minor, ReleaseType::Patch};

bool is_update(ReleaseType t) { return t != ReleaseType::Initial; }

std::string type_name(ReleaseType t) { return std::string(semver::to_string(t)); }

// Counts numerators per (group, metric) against a population per (group,
// metric). Emits rows in group order, metrics in registration order.
class ProportionTable {
public:
    ProportionTable(std::string table, std::vector<std::string> metrics)
        : table_(std::move(table)), metrics_(std::move(metrics)) {}

    void add(const std::string& group, std::size_t metric, bool hit) {
        auto& cells = groups_[group];
        if (cells.empty()) cells.resize(metrics_.size());
        ++cells[metric].population;
        if (hit) ++cells[metric].hits;
    }

    void add_counts(const std::string& group, std::size_t metric, std::size_t hits, std::size_t population) {
        auto& cells = groups_[group];
        if (cells.empty()) cells.resize(metrics_.size());
        cells[metric].population += population;
        cells[metric].hits += hits;
    }

    void emit(MonthlySeries& out) const {
        for (const auto& [group, cells] : groups_) {
            for (std::size_t m = 0; m < metrics_.size(); ++m) {
                if (cells[m].population == 0) continue;
                double value = static_cast<double>(cells[m].hits) / static_cast<double>(cells[m].population);
                out.rows.push_back({table_, group, metrics_[m], value, cells[m].population});
            }
        }
    }

private:
    struct Cell {
        std::size_t hits = 0;
        std::size_t population = 0;
    };
    std::string table_;
    std::vector<std::string> metrics_;
    std::map<std::string, std::vector<Cell>> groups_;
};

class DistributionTable {
public:
    explicit DistributionTable(std::string table) : table_(std::move(table)) {}

    void add(const std::string& group, double value) { groups_[group].push_back(value); }

    void emit(std::vector<DistributionRow>& out) const {
        for (const auto& [group, values] : groups_) out.push_back(summarize(table_, group, values));
    }

private:
    std::string table_;
    std::map<std::string, std::vector<double>> groups_;
};

double quantile(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// Per-release facts computed in parallel, then reduced in release order.
template <typename Fact, typename Compute>
std::vector<std::optional<Fact>> collect(const PackageIndex& idx, const Options& opts, Compute&& compute) {
    std::vector<std::optional<Fact>> facts(idx.release_count());
    parallel_for(
        idx.release_count(), [&](std::size_t i) { facts[i] = compute(static_cast<ReleaseId>(i)); }, opts.workers);
    return facts;
}

struct LifespanFact {
    std::string month;
    bool release_lagging = false;
    std::size_t deps = 0;
    std::size_t deps_lagging = 0;
    LifespanEvents events;
};

struct WhatIfFact {
    std::string month;
    std::vector<bool> lagging;  // baseline, then one per level
};

}  // namespace

std::vector<SeriesRow> MonthlySeries::select(std::string_view table, std::string_view metric) const {
    std::vector<SeriesRow> out;
    for (const auto& row : rows) {
        if (row.table == table && row.metric == metric) out.push_back(row);
    }
    return out;
}

DistributionRow summarize(std::string table, std::string group, std::vector<double> values) {
    DistributionRow row;
    row.table = std::move(table);
    row.group = std::move(group);
    row.count = values.size();
    if (values.empty()) return row;
    std::sort(values.begin(), values.end());
    row.p25 = quantile(values, 0.25);
    row.median = quantile(values, 0.5);
    row.p75 = quantile(values, 0.75);
    // Summing in sorted order keeps the mean independent of input order.
    row.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return row;
}

MonthlySeries rq1_proportions(const PackageIndex& idx, const Options& opts) {
    auto facts = collect<LifespanFact>(idx, opts, [&](ReleaseId r) -> std::optional<LifespanFact> {
        auto events = lifespan_events(r, idx, opts.observation_end);
        if (!events) return std::nullopt;
        const Release& rel = idx.release(r);
        LifespanFact fact;
        fact.month = month_key(rel.date);
        fact.events = *events;
        fact.deps = rel.deps.size();
        std::vector<bool> dep_lagging(rel.deps.size(), false);
        for (const auto& s : lifespan_samples(r, idx, opts.observation_end)) {
            if (s.lag <= Duration{0}) continue;
            if (s.dependency) {
                dep_lagging[*s.dependency] = true;
            } else {
                fact.release_lagging = true;
            }
        }
        fact.deps_lagging = static_cast<std::size_t>(std::count(dep_lagging.begin(), dep_lagging.end(), true));
        return fact;
    });

    ProportionTable lagging("lagging_proportion", {"releases", "dependencies"});
    ProportionTable updates("lifespan_updates",
                            {"target_update_available", "target_update_missed", "missed_over_available"});
    for (const auto& fact : facts) {
        if (!fact) continue;
        lagging.add(fact->month, 0, fact->release_lagging);
        lagging.add_counts(fact->month, 1, fact->deps_lagging, fact->deps);
        updates.add(fact->month, 0, fact->events.target_updated);
        updates.add(fact->month, 1, fact->events.update_missed);
        if (fact->events.target_updated) updates.add(fact->month, 2, fact->events.update_missed);
    }
    MonthlySeries out;
    lagging.emit(out);
    updates.emit(out);
    return out;
}

std::vector<DistributionRow> rq2_distributions(const PackageIndex& idx, const Options& opts) {
    struct Fact {
        std::string month;
        std::string year;
        ReleaseType type;
        LifespanLags lags;
    };
    auto facts = collect<Fact>(idx, opts, [&](ReleaseId r) -> std::optional<Fact> {
        auto lags = lifespan_lags(r, idx, opts.observation_end);
        if (!lags.at_next) return std::nullopt;
        const Release& rel = idx.release(r);
        return Fact{month_key(rel.date), year_key(rel.date), rel.type, lags};
    });

    DistributionTable at_next("lag_at_next_release_monthly");
    DistributionTable at_release("lag_at_release_yearly_by_type");
    for (const auto& fact : facts) {
        if (!fact) continue;
        if (*fact->lags.at_next > Duration{0}) at_next.add(fact->month, to_days(*fact->lags.at_next));
        if (is_update(fact->type) && fact->lags.at_release > Duration{0}) {
            at_release.add(fact->year + "/" + type_name(fact->type), to_days(fact->lags.at_release));
        }
    }
    std::vector<DistributionRow> out;
    at_next.emit(out);
    at_release.emit(out);
    return out;
}

Tables rq3_update_stats(const PackageIndex& idx, const Options& opts) {
    struct Fact {
        std::string month;
        ReleaseType type;
        ReleaseType next_type;
        Duration lifespan;
    };
    auto facts = collect<Fact>(idx, opts, [&](ReleaseId r) -> std::optional<Fact> {
        auto next = idx.next_by_date(r);
        if (!next) return std::nullopt;
        const Release& rel = idx.release(r);
        const Release& after = idx.release(*next);
        return Fact{month_key(rel.date), rel.type, after.type, after.date - rel.date};
    });

    ProportionTable proportions("update_type_proportion", {"MAJOR", "MINOR", "PATCH"});
    DistributionTable monthly("lifespan_monthly");
    DistributionTable by_pair("lifespan_by_type_pair");
    for (const auto& fact : facts) {
        if (!fact) continue;
        monthly.add(fact->month, to_days(fact->lifespan));
        by_pair.add(type_name(fact->type) + "->" + type_name(fact->next_type), to_days(fact->lifespan));
        if (is_update(fact->next_type)) {
            for (std::size_t m = 0; m < kUpdateTypes.size(); ++m) {
                proportions.add(fact->month, m, fact->next_type == kUpdateTypes[m]);
            }
        }
    }
    Tables out;
    proportions.emit(out.series);
    monthly.emit(out.distributions);
    by_pair.emit(out.distributions);
    return out;
}

Tables rq4_growth(const PackageIndex& idx, const Options& opts) {
    struct Fact {
        std::string month;
        Duration growth;
        std::vector<ReleaseType> missed;
    };
    auto facts = collect<Fact>(idx, opts, [&](ReleaseId r) -> std::optional<Fact> {
        auto lags = lifespan_lags(r, idx, opts.observation_end);
        if (!lags.at_next) return std::nullopt;
        auto types = missed_types(r, idx, opts.observation_end);
        return Fact{month_key(idx.release(r).date), *lags.at_next - lags.at_release, std::move(*types)};
    });

    DistributionTable growth("lag_growth_monthly");
    ProportionTable missed("newly_missed_type_proportion", {"MAJOR", "MINOR", "PATCH"});
    for (const auto& fact : facts) {
        if (!fact) continue;
        if (fact->growth > Duration{0}) growth.add(fact->month, to_days(fact->growth));
        for (std::size_t m = 0; m < kUpdateTypes.size(); ++m) {
            bool hit = std::find(fact->missed.begin(), fact->missed.end(), kUpdateTypes[m]) != fact->missed.end();
            missed.add(fact->month, m, hit);
        }
    }
    Tables out;
    missed.emit(out.series);
    growth.emit(out.distributions);
    return out;
}

Tables rq5_changes(const PackageIndex& idx, const Options& opts) {
    struct Fact {
        std::string month;
        ReleaseType type;
        LagDirection direction;
        std::vector<ReleaseType> adopted;
    };
    auto facts = collect<Fact>(idx, opts, [&](ReleaseId r) -> std::optional<Fact> {
        auto change = lag_change(r, idx);
        if (!change) return std::nullopt;
        const Release& rel = idx.release(r);
        return Fact{month_key(rel.date), rel.type, change->direction, std::move(*adoption(r, idx))};
    });

    const std::vector<std::string> directions = {"HIGHER", "SAME", "LOWER"};
    ProportionTable monthly("lag_change_proportion", directions);
    ProportionTable by_type("lag_change_by_type", directions);
    ProportionTable adopted("adoption_by_type", {"MAJOR", "MINOR", "PATCH"});
    for (const auto& fact : facts) {
        if (!fact) continue;
        auto d = static_cast<std::size_t>(fact->direction);
        for (std::size_t m = 0; m < directions.size(); ++m) {
            monthly.add(fact->month, m, m == d);
            by_type.add(type_name(fact->type), m, m == d);
        }
        for (std::size_t m = 0; m < kUpdateTypes.size(); ++m) {
            bool hit = std::find(fact->adopted.begin(), fact->adopted.end(), kUpdateTypes[m]) != fact->adopted.end();
            adopted.add(type_name(fact->type), m, hit);
        }
    }
    Tables out;
    monthly.emit(out.series);
    by_type.emit(out.series);
    adopted.emit(out.series);
    return out;
}

MonthlySeries rq6_whatif(const PackageIndex& idx, std::span<const LoosenLevel> levels, const Options& opts) {
    auto facts = collect<WhatIfFact>(idx, opts, [&](ReleaseId r) -> std::optional<WhatIfFact> {
        auto next = next_release_date(r, idx, opts.observation_end);
        if (!next) return std::nullopt;
        const Release& rel = idx.release(r);
        WhatIfFact fact;
        fact.month = month_key(rel.date);
        fact.lagging.push_back(release_lag(rel, rel.date, idx) > Duration{0} ||
                               release_lag(rel, *next, idx) > Duration{0});
        for (LoosenLevel level : levels) {
            fact.lagging.push_back(lag_loosened(rel, rel.date, level, idx) > Duration{0} ||
                                   lag_loosened(rel, *next, level, idx) > Duration{0});
        }
        return fact;
    });

    std::vector<std::string> metrics = {"baseline"};
    for (LoosenLevel level : levels) metrics.emplace_back(to_string(level));
    ProportionTable table("whatif_lagging_releases", metrics);
    for (const auto& fact : facts) {
        if (!fact) continue;
        for (std::size_t m = 0; m < metrics.size(); ++m) table.add(fact->month, m, fact->lagging[m]);
    }
    MonthlySeries out;
    table.emit(out);
    return out;
}

MonthlySeries rq6_whatif(const PackageIndex& idx, LoosenLevel level, const Options& opts) {
    const LoosenLevel levels[] = {level};
    return rq6_whatif(idx, levels, opts);
}

void write_csv(std::ostream& out, const Tables& tables) {
    auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    out << "table,group,metric,value,count\n";
    for (const auto& row : tables.series.rows) {
        out << row.table << ',' << row.group << ',' << row.metric << ',' << fmt(row.value) << ','
            << row.population << '\n';
    }
    for (const auto& row : tables.distributions) {
        const std::pair<const char*, double> stats[] = {
            {"p25", row.p25}, {"median", row.median}, {"mean", row.mean}, {"p75", row.p75}};
        for (const auto& [name, value] : stats) {
            out << row.table << ',' << row.group << ',' << name << ',' << fmt(value) << ',' << row.count << '\n';
        }
    }
}

}  // namespace laggraph::report
