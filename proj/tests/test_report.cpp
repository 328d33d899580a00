#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include <laggraph/fixture.hpp>
#include <laggraph/report.hpp>

#include "support/generators.hpp"

using namespace laggraph;
using namespace laggraph::report;
using fixture::at;

namespace {

const SeriesRow* find_row(const MonthlySeries& s, std::string_view table, std::string_view group,
                          std::string_view metric) {
    for (const auto& row : s.rows) {
        if (row.table == table && row.group == group && row.metric == metric) return &row;
    }
    return nullptr;
}

const DistributionRow* find_dist(const std::vector<DistributionRow>& rows, std::string_view table,
                                 std::string_view group) {
    for (const auto& row : rows) {
        if (row.table == table && row.group == group) return &row;
    }
    return nullptr;
}

std::string csv(const Tables& t) {
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

Tables series_only(MonthlySeries s) {
    Tables t;
    t.series = std::move(s);
    return t;
}

RawRecord rec(std::string package, std::string version, Timestamp date, std::vector<RawDependency> deps = {}) {
    return {std::move(package), std::move(version), date, std::move(deps), {}};
}

Timestamp on(const char* date) { return parse_timestamp(date); }

}  // namespace

TEST_CASE("summarize") {
    auto single = summarize("t", "g", {10});
    CHECK(single.p25 == 10);
    CHECK(single.median == 10);
    CHECK(single.mean == 10);
    CHECK(single.p75 == 10);

    auto four = summarize("t", "g", {8, 2, 6, 4});
    CHECK(four.median == doctest::Approx(5));
    CHECK(four.mean == doctest::Approx(5));
    CHECK(four.p25 == doctest::Approx(3.5));
    CHECK(four.p75 == doctest::Approx(6.5));
    CHECK(four.count == 4);
}

TEST_CASE("rq1: one lagging and one lag-free release in the same month") {
    std::vector<RawRecord> records = {
        rec("t", "1.0.0", on("2016-12-01")),
        rec("t", "1.1.0", on("2016-12-05")),
        rec("a", "1.0.0", on("2017-01-02"), {{"t", "~1.0.0", DepKind::Runtime}}),
        rec("a", "1.0.1", on("2017-02-01")),
        rec("b", "1.0.0", on("2017-01-03"), {{"t", "^1.0.0", DepKind::Runtime}}),
        rec("b", "1.0.1", on("2017-02-02")),
    };
    auto series = rq1_proportions(PackageIndex::build(records));
    CHECK(find_row(series, "lagging_proportion", "2017-01", "releases")->value == doctest::Approx(0.5));
    CHECK(find_row(series, "lagging_proportion", "2017-01", "releases")->population == 2);
    CHECK(find_row(series, "lagging_proportion", "2017-01", "dependencies")->value == doctest::Approx(0.5));
    CHECK(find_row(series, "lagging_proportion", "2016-12", "releases")->value == 0);
    CHECK(find_row(series, "lagging_proportion", "2017-02", "releases") == nullptr);
}

TEST_CASE("rq1: a single lagging release and a corpus without dependencies") {
    std::vector<RawRecord> records = {
        rec("t", "1.0.0", on("2016-12-01")),
        rec("t", "1.1.0", on("2016-12-05")),
        rec("a", "1.0.0", on("2017-01-02"), {{"t", "~1.0.0", DepKind::Runtime}}),
        rec("a", "1.0.1", on("2017-02-01")),
    };
    Options opts;
    auto series = rq1_proportions(PackageIndex::build(records), opts);
    CHECK(find_row(series, "lagging_proportion", "2017-01", "releases")->value == 1.0);

    std::vector<RawRecord> flat = {rec("x", "1.0.0", on("2017-01-01")), rec("x", "1.0.1", on("2017-01-09")),
                                   rec("y", "1.0.0", on("2017-01-01")), rec("y", "2.0.0", on("2017-03-01"))};
    for (const auto& row : rq1_proportions(PackageIndex::build(flat)).rows) CHECK(row.value == 0);
}

TEST_CASE("rq1 and rq2 on the worked example") {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto series = rq1_proportions(idx);
    // p1 1.0.0 lags; p2 1.0.0, 1.0.1, 1.1.0 and 1.0.2 have no dependencies.
    CHECK(find_row(series, "lagging_proportion", "2017-01", "releases")->value == doctest::Approx(0.2));
    CHECK(find_row(series, "lifespan_updates", "2017-01", "missed_over_available")->value == 1.0);

    auto dists = rq2_distributions(idx);
    auto row = find_dist(dists, "lag_at_next_release_monthly", "2017-01");
    REQUIRE(row);
    CHECK(row->count == 1);
    CHECK(row->median == doctest::Approx(4));
    CHECK(row->mean == doctest::Approx(4));
}

TEST_CASE("rq3 lifespans and update types") {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto tables = rq3_update_stats(idx);
    auto monthly = find_dist(tables.distributions, "lifespan_monthly", "2017-01");
    REQUIRE(monthly);
    // p2: T3-T1, T5-T3, T8-T5, T9-T8 and p1: T9-T1
    auto expected = summarize("lifespan_monthly", "2017-01", {2, 2, 3, 1, 8});
    CHECK(monthly->count == 5);
    CHECK(monthly->median == expected.median);
    CHECK(monthly->mean == expected.mean);
    CHECK(find_dist(tables.distributions, "lifespan_by_type_pair", "PATCH->MAJOR")->median == 1);
    CHECK(find_dist(tables.distributions, "lifespan_by_type_pair", "MINOR->PATCH")->median == 3);

    std::vector<RawRecord> daily;
    for (int i = 0; i < 10; ++i) daily.push_back(rec("d", "1.0." + std::to_string(i), on("2017-03-01") + days(i)));
    auto patches = rq3_update_stats(PackageIndex::build(daily));
    CHECK(find_dist(patches.distributions, "lifespan_monthly", "2017-03")->median == 1);
    CHECK(find_row(patches.series, "update_type_proportion", "2017-03", "PATCH")->value == 1.0);
    CHECK(find_row(patches.series, "update_type_proportion", "2017-03", "MAJOR")->value == 0);
}

TEST_CASE("rq4 growth and newly missed types") {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto tables = rq4_growth(idx);
    auto growth = find_dist(tables.distributions, "lag_growth_monthly", "2017-01");
    REQUIRE(growth);
    CHECK(growth->count == 1);
    CHECK(growth->median == doctest::Approx(4));
    // five releases with a next release; only p1 1.0.0 misses anything
    CHECK(find_row(tables.series, "newly_missed_type_proportion", "2017-01", "MINOR")->value == doctest::Approx(0.2));
    CHECK(find_row(tables.series, "newly_missed_type_proportion", "2017-01", "MAJOR")->value == doctest::Approx(0.2));
    CHECK(find_row(tables.series, "newly_missed_type_proportion", "2017-01", "PATCH")->value == 0);
}

TEST_CASE("rq5 lag changes and adoption") {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto tables = rq5_changes(idx);
    CHECK(find_row(tables.series, "lag_change_by_type", "MINOR", "LOWER")->value == doctest::Approx(1.0 / 2.0));
    CHECK(find_row(tables.series, "adoption_by_type", "MINOR", "MINOR")->value == doctest::Approx(1.0 / 2.0));

    std::vector<RawRecord> repeat;
    for (int i = 0; i < 4; ++i) {
        repeat.push_back(rec("t", "1." + std::to_string(i) + ".0", on("2017-01-01") + days(3 * i)));
        repeat.push_back(rec("a", "2.0." + std::to_string(i), on("2017-01-02") + days(3 * i),
                             {{"t", "~1.0.0", DepKind::Runtime}}));
    }
    auto same = rq5_changes(PackageIndex::build(repeat));
    for (const auto& row : same.series.select("lag_change_proportion", "SAME")) CHECK(row.value == 1.0);
}

TEST_CASE("rq6 on the worked example") {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto series = rq6_whatif(idx, LoosenLevel::PatchAndMinor);
    CHECK(find_row(series, "whatif_lagging_releases", "2017-01", "baseline")->value == doctest::Approx(0.2));
    CHECK(find_row(series, "whatif_lagging_releases", "2017-01", "minor")->value == 0);
}

TEST_CASE("report invariants on random corpora") {
    testgen::Rng rng(9090);
    for (int round = 0; round < 25; ++round) {
        auto idx = PackageIndex::build(testgen::random_corpus(rng));
        Options opts;
        opts.observation_end = testgen::chance(rng, 0.5);

        Tables all;
        auto append = [&](Tables t) {
            all.series.rows.insert(all.series.rows.end(), t.series.rows.begin(), t.series.rows.end());
            all.distributions.insert(all.distributions.end(), t.distributions.begin(), t.distributions.end());
        };
        append(series_only(rq1_proportions(idx, opts)));
        append({{}, rq2_distributions(idx, opts)});
        append(rq3_update_stats(idx, opts));
        append(rq4_growth(idx, opts));
        append(rq5_changes(idx, opts));
        const LoosenLevel levels[] = {LoosenLevel::None, LoosenLevel::Patch, LoosenLevel::PatchAndMinor};
        append(series_only(rq6_whatif(idx, levels, opts)));

        for (const auto& row : all.series.rows) {
            CHECK(row.value >= 0);
            CHECK(row.value <= 1);
        }
        for (const auto& row : all.distributions) {
            CHECK(row.p25 <= row.median);
            CHECK(row.median <= row.p75);
            CHECK(row.count > 0);
        }

        std::map<std::pair<std::string, std::string>, double> sums;
        for (const auto& row : all.series.rows) {
            if (row.table == "update_type_proportion" || row.table == "lag_change_proportion" ||
                row.table == "lag_change_by_type")
                sums[{row.table, row.group}] += row.value;
        }
        for (const auto& [key, sum] : sums) CHECK(std::abs(sum - 1.0) < 1e-9);

        auto rq1_releases = rq1_proportions(idx, opts).select("lagging_proportion", "releases");
        auto baseline = all.series.select("whatif_lagging_releases", "baseline");
        auto none = all.series.select("whatif_lagging_releases", "none");
        auto patch = all.series.select("whatif_lagging_releases", "patch");
        auto minor = all.series.select("whatif_lagging_releases", "minor");
        REQUIRE(rq1_releases.size() == none.size());
        for (std::size_t i = 0; i < none.size(); ++i) {
            CHECK(none[i].group == rq1_releases[i].group);
            CHECK(none[i].value == rq1_releases[i].value);
            CHECK(none[i].population == rq1_releases[i].population);
            CHECK(none[i].value == baseline[i].value);
            CHECK(minor[i].value <= patch[i].value);
            CHECK(patch[i].value <= baseline[i].value);
        }
    }
}

TEST_CASE("output does not depend on the worker count") {
    testgen::Rng rng(31);
    auto idx = PackageIndex::build(testgen::random_corpus(rng));
    Options one;
    one.workers = 1;
    Options many;
    many.workers = 4;
    CHECK(csv(rq4_growth(idx, one)) == csv(rq4_growth(idx, many)));
    CHECK(csv(rq5_changes(idx, one)) == csv(rq5_changes(idx, many)));
    CHECK(csv({{}, rq2_distributions(idx, one)}) == csv({{}, rq2_distributions(idx, many)}));
    CHECK(csv(series_only(rq1_proportions(idx, one))) == csv(series_only(rq1_proportions(idx, many))));
}

TEST_CASE("csv layout") {
    Tables t;
    t.series.rows.push_back({"tab", "2017-01", "releases", 1.0 / 3.0, 3});
    t.distributions.push_back(summarize("dist", "2017-01", {1, 2}));
    CHECK(csv(t) ==
          "table,group,metric,value,count\n"
          "tab,2017-01,releases,0.333333,3\n"
          "dist,2017-01,p25,1.250000,2\n"
          "dist,2017-01,median,1.500000,2\n"
          "dist,2017-01,mean,1.500000,2\n"
          "dist,2017-01,p75,1.750000,2\n");
}
