// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <laggraph/fixture.hpp>
#include <laggraph/lag.hpp>
#include <laggraph/report.hpp>
#include <laggraph/semver.hpp>

#include "cli.hpp"
#include "lag_oracle.hpp"
#include "semver_oracle.hpp"
#include "support/generators.hpp"

namespace fs = std::filesystem;
using namespace laggraph;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("laggraph_accept_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o, e;
    int status = cli::run(args, o, e);
    if (out) *out = o.str();
    if (status != 0) std::cerr << e.str();
    return status;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> version_strings(const PackageIndex& idx, const std::vector<ReleaseId>& ids) {
    std::vector<std::string> out;
    for (ReleaseId r : ids) out.push_back(idx.release(r).version.to_string());
    return out;
}

// Criterion 3 and 5 share these corpora.
std::vector<std::vector<RawRecord>> random_corpora() {
    testgen::Rng rng(20170101);
    std::vector<std::vector<RawRecord>> out;
    for (int i = 0; i < 200; ++i) out.push_back(testgen::random_corpus(rng));
    return out;
}

Outcome table_one() {
    auto start = Clock::now();
    TempDir dir("table1");
    auto ex = (dir.path / "fixture").string();
    std::string table;
    if (cli({"example", "--out", ex}) != 0) return {false, "example failed"};
    if (cli({"lag-table", "--in", ex, "--no-filter", "--target", "p2", "--constraint", "~1.0.0", "--at",
             "2017-01-03T00:00:00Z,2017-01-05T00:00:00Z,2017-01-07T00:00:00Z,2017-01-10T00:00:00Z"},
            &table) != 0)
        return {false, "lag-table failed"};
    const std::string expected =
        "time,max_installable,missed,lag_days\n"
        "2017-01-03T00:00:00Z,1.0.0,,0.000000\n"
        "2017-01-05T00:00:00Z,1.0.1,,0.000000\n"
        "2017-01-07T00:00:00Z,1.0.1,1.1.0,1.000000\n"
        "2017-01-10T00:00:00Z,1.0.2,1.1.0;2.0.0,4.000000\n";
    double elapsed = seconds_since(start);
    if (table != expected) return {false, "got:\n" + table};
    if (elapsed >= 1.0) return {false, "took " + std::to_string(elapsed) + " s"};
    return {true, "4 rows exact in " + std::to_string(elapsed) + " s"};
}

Outcome caret_example() {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto dep = Dependency::make(*idx.find_package("p2"), "^1.0.0");
    Duration t9 = dep_lag(dep, fixture::at(9), idx);
    Duration t10 = dep_lag(dep, fixture::at(10), idx);
    bool ok = t9 == Duration{0} && t10 == std::chrono::hours(24);
    return {ok, "lag at T9 = " + std::to_string(t9.count()) + " s, at T10 = " + std::to_string(t10.count()) + " s"};
}

Outcome oracle_equivalence(const std::vector<std::vector<RawRecord>>& corpora) {
    auto start = Clock::now();
    testgen::Rng rng(77);
    std::size_t evaluations = 0;
    for (std::size_t c = 0; c < corpora.size(); ++c) {
        const auto& records = corpora[c];
        auto idx = PackageIndex::build(records);
        oracle::BruteForceCorpus reference(records);
        auto times = testgen::random_times(rng, 10);
        for (const auto& rec : records) {
            const Release& rel = idx.release(*idx.find_release(rec.package, rec.version));
            for (std::size_t i = 0; i < rec.dependencies.size(); ++i) {
                for (Timestamp t : times) {
                    auto expected = reference.evaluate(rec.dependencies[i].target, rec.dependencies[i].constraint, t);
                    if (!expected) return {false, "constraint outside the reference grammar: " + rec.dependencies[i].constraint};
                    ++evaluations;
                    if (dep_lag(rel.deps[i], t, idx) != expected->lag ||
                        version_strings(idx, missed(rel.deps[i], t, idx)) != expected->missed) {
                        return {false, "corpus " + std::to_string(c) + ": " + rec.package + "@" + rec.version + " -> " +
                                           rec.dependencies[i].target + " \"" + rec.dependencies[i].constraint +
                                           "\" at " + format_timestamp(t)};
                    }
                }
            }
        }
    }
    double elapsed = seconds_since(start);
    std::ostringstream d;
    d << corpora.size() << " corpora, " << evaluations << " evaluations in " << elapsed << " s";
    return {elapsed < 60.0, d.str()};
}

Outcome semver_differential() {
    std::vector<std::string> versions;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c) {
                std::string base = std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c);
                versions.push_back(base);
                versions.push_back(base + "-rc.1");
            }
    std::vector<std::string> constraints;
    for (int b = 0; b <= 4; ++b)
        for (int c = 0; c <= 4; ++c) constraints.push_back("^0." + std::to_string(b) + "." + std::to_string(c));
    testgen::Rng rng(4);
    while (constraints.size() < 520) constraints.push_back(testgen::random_constraint(rng, testgen::random_triple(rng, 4, 0)));

    std::size_t checks = 0;
    for (const auto& text : constraints) {
        auto expansion = oracle::expand(text);
        if (!expansion) return {false, "oracle cannot expand " + text};
        auto c = semver::parse_constraint(text);
        for (const auto& v : versions) {
            ++checks;
            if (semver::satisfies(semver::parse_version(v), c) != oracle::contains(*expansion, *oracle::read_version(v)))
                return {false, v + " vs \"" + text + "\""};
        }
    }
    return {true, std::to_string(constraints.size()) + " constraints x " + std::to_string(versions.size()) +
                      " versions = " + std::to_string(checks) + " checks"};
}

std::string series_body(const std::vector<report::SeriesRow>& rows) {
    std::ostringstream out;
    report::Tables t;
    for (auto row : rows) {
        row.table = "x";
        row.metric = "x";
        t.series.rows.push_back(row);
    }
    report::write_csv(out, t);
    return out.str();
}

Outcome whatif_dominance(const std::vector<std::vector<RawRecord>>& corpora) {
    const LoosenLevel levels[] = {LoosenLevel::None, LoosenLevel::Patch, LoosenLevel::PatchAndMinor};
    std::size_t points = 0;
    for (std::size_t c = 0; c < corpora.size(); ++c) {
        auto idx = PackageIndex::build(corpora[c]);
        auto series = report::rq6_whatif(idx, levels);
        auto baseline = series.select("whatif_lagging_releases", "baseline");
        auto none = series.select("whatif_lagging_releases", "none");
        auto patch = series.select("whatif_lagging_releases", "patch");
        auto minor = series.select("whatif_lagging_releases", "minor");
        auto rq1 = report::rq1_proportions(idx).select("lagging_proportion", "releases");
        if (series_body(none) != series_body(baseline) || series_body(baseline) != series_body(rq1))
            return {false, "corpus " + std::to_string(c) + ": level none differs from baseline"};
        for (std::size_t i = 0; i < baseline.size(); ++i) {
            ++points;
            if (!(minor[i].value <= patch[i].value && patch[i].value <= baseline[i].value))
                return {false, "corpus " + std::to_string(c) + " month " + baseline[i].group};
        }
    }
    return {true, std::to_string(corpora.size()) + " corpora, " + std::to_string(points) + " monthly points"};
}

Outcome filter_accounting() {
    constexpr int kCore = 40, kCoreReleases = 15, kPre = 50, kSingle = 100, kStale = 25, kStaleReleases = 6,
                  kIsolated = 20, kIsolatedReleases = 5;
    const Timestamp cutoff = testgen::origin() + days(200);
    auto date = [](int day) { return testgen::origin() + days(day); };
    std::vector<RawRecord> records;
    auto core = [](int i) { return "core" + std::to_string(i); };

    for (int p = 0; p < kCore; ++p) {
        for (int r = 0; r < kCoreReleases; ++r) {
            RawRecord rec{core(p), "1." + std::to_string(r) + ".0", date(10 + 20 * r), {}, {}};
            rec.dependencies.push_back({core((p + 1) % kCore), "^1.0.0", DepKind::Runtime});
            records.push_back(std::move(rec));
        }
    }
    for (int i = 0; i < kPre; ++i) {
        int p = i % kCore;
        records.push_back({core(p), "2.0." + std::to_string(i / kCore) + "-beta", date(300 + i), {
                               {core((p + 1) % kCore), "*", DepKind::Runtime}}, {}});
    }
    for (int i = 0; i < kSingle; ++i) {
        records.push_back({"single" + std::to_string(i), "1.0.0", date(250), {{core(i % kCore), "*", DepKind::Runtime}}, {}});
    }
    for (int p = 0; p < kStale; ++p) {
        for (int r = 0; r < kStaleReleases; ++r) {
            records.push_back({"stale" + std::to_string(p), "0.1." + std::to_string(r), date(5 + 30 * r),
                               {{core(p % kCore), "*", DepKind::Runtime}}, {}});
        }
    }
    for (int p = 0; p < kIsolated; ++p) {
        for (int r = 0; r < kIsolatedReleases; ++r) {
            records.push_back({"isolated" + std::to_string(p), "3.0." + std::to_string(r), date(220 + r), {}, {}});
        }
    }
    if (records.size() != 1000) return {false, "planted corpus has " + std::to_string(records.size()) + " releases"};

    FilterConfig cfg;
    cfg.activity_cutoff = cutoff;
    auto result = filter(records, cfg);
    const auto& r = result.report;
    std::ostringstream d;
    d << "pre " << r.releases_prerelease << "/" << kPre << ", single " << r.packages_single_release << "/" << kSingle
      << ", stale " << r.packages_stale << "/" << kStale << " (" << r.releases_stale << " releases), isolated "
      << r.packages_isolated << "/" << kIsolated << " (" << r.releases_isolated << " releases), kept "
      << r.output_releases;
    bool ok = r.input_releases == 1000 && r.releases_invalid_version == 0 && r.releases_prerelease == kPre &&
              r.packages_single_release == kSingle && r.releases_single_release == kSingle &&
              r.packages_stale == kStale && r.releases_stale == kStale * kStaleReleases &&
              r.packages_isolated == kIsolated && r.releases_isolated == kIsolated * kIsolatedReleases &&
              r.output_releases == kCore * kCoreReleases && r.output_packages == kCore;
    return {ok, d.str()};
}

std::vector<RawRecord> scale_corpus() {
    constexpr int kPackages = 5000, kReleases = 20, kDeps = 5;
    std::mt19937 rng(7);
    std::vector<std::vector<std::string>> versions(kPackages);
    std::vector<RawRecord> records;
    records.reserve(kPackages * kReleases);
    const Timestamp start = parse_timestamp("2014-01-01T00:00:00Z");
    for (int p = 0; p < kPackages; ++p) {
        int major = 1, minor = 0, patch = 0;
        Timestamp when = start + days(testgen::uniform(rng, 0, 200));
        for (int r = 0; r < kReleases; ++r) {
            if (r > 0) {
                int kind = testgen::uniform(rng, 0, 9);
                if (kind == 0) {
                    ++major, minor = 0, patch = 0;
                } else if (kind < 4) {
                    ++minor, patch = 0;
                } else {
                    ++patch;
                }
                when += days(testgen::uniform(rng, 1, 60)) + Duration{testgen::uniform(rng, 0, 86399)};
            }
            std::string v = std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
            versions[p].push_back(v);
            records.push_back({"pkg" + std::to_string(p), v, when, {}, {}});
        }
    }
    static const char* ops[] = {"^", "~", ">=", "", "^", "^"};
    for (auto& rec : records) {
        for (int d = 0; d < kDeps; ++d) {
            int target = testgen::uniform(rng, 0, kPackages - 1);
            const auto& anchor = versions[target][testgen::uniform(rng, 0, kReleases - 1)];
            std::string constraint = d == 4 && testgen::chance(rng, 0.1) ? "*" : ops[testgen::uniform(rng, 0, 5)] + anchor;
            rec.dependencies.push_back({"pkg" + std::to_string(target), constraint, DepKind::Runtime});
        }
    }
    return records;
}

Outcome determinism_and_scale() {
    TempDir dir("scale");
    auto records = scale_corpus();
    std::size_t deps = 0;
    for (const auto& r : records) deps += r.dependencies.size();
    write_csv(records, dir.path / "corpus");

    std::vector<std::string> outputs;
    std::vector<double> times;
    for (int run = 0; run < 2; ++run) {
        auto out = dir.path / ("run" + std::to_string(run));
        auto start = Clock::now();
        if (cli({"analyze", "all", "--in", (dir.path / "corpus").string(), "--out", out.string()}) != 0)
            return {false, "analyze failed"};
        times.push_back(seconds_since(start));
        std::string all;
        for (const char* name : {"rq1.csv", "rq2.csv", "rq3.csv", "rq4.csv", "rq5.csv", "rq6.csv", "run.json"}) {
            all += slurp(out / name);
        }
        outputs.push_back(std::move(all));
    }
    std::ostringstream d;
    d << records.size() << " releases, " << deps << " dependencies; runs took " << times[0] << " s and " << times[1]
      << " s; " << outputs[0].size() << " output bytes";
    bool ok = records.size() >= 100000 && deps >= 500000 && outputs[0] == outputs[1] && !outputs[0].empty() &&
              times[0] < 120 && times[1] < 120;
    if (outputs[0] != outputs[1]) d << "; outputs differ";
    return {ok, d.str()};
}

Outcome ingestion_only() {
    TempDir dir("ingest");
    testgen::Rng rng(99);
    auto dump = testgen::random_corpus(rng);
    for (auto& rec : dump) {
        if (testgen::chance(rng, 0.2)) rec.dependencies.push_back({"p0", "*", DepKind::Dev});
    }
    write_jsonl(dump, dir.path / "dump.jsonl");
    auto out = dir.path / "out";
    if (cli({"analyze", "all", "--in", (dir.path / "dump.jsonl").string(), "--out", out.string()}) != 0)
        return {false, "analyze failed on a neutral-schema dump"};
    for (const char* name : {"rq1.csv", "rq2.csv", "rq3.csv", "rq4.csv", "rq5.csv", "rq6.csv", "run.json"}) {
        if (!fs::exists(out / name)) return {false, std::string("missing ") + name};
    }
    return {true, "dump ingested and all series emitted; no numeric tolerance asserted"};
}

}  // namespace

// With no arguments every criterion runs; otherwise only the listed numbers.
int main(int argc, char** argv) {
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::stoul(argv[i]));
    std::vector<std::vector<RawRecord>> corpora;
    auto shared = [&]() -> const std::vector<std::vector<RawRecord>>& {
        if (corpora.empty()) corpora = random_corpora();
        return corpora;
    };
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"worked example lag table", table_one},
        {"caret example", caret_example},
        {"brute-force oracle equivalence", [&] { return oracle_equivalence(shared()); }},
        {"semver differential lattice", semver_differential},
        {"what-if dominance", [&] { return whatif_dominance(shared()); }},
        {"filter accounting", filter_accounting},
        {"determinism and scale", determinism_and_scale},
        {"dump ingestion", ingestion_only},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), i + 1) == selected.end()) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << " ("
                  << o.detail << ")" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
