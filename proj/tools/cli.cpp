#include "cli.hpp"

#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "lag_oracle.hpp"
#include "laggraph/corpus.hpp"
#include "laggraph/fixture.hpp"
#include "laggraph/index.hpp"
#include "laggraph/lag.hpp"
#include "laggraph/report.hpp"
#include "laggraph/whatif.hpp"

namespace laggraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct FilterFlags {
    std::vector<std::string> keep_kinds{"runtime"};
    bool keep_prereleases = false;
    bool keep_single_release = false;
    bool keep_isolated = false;
    std::string activity_cutoff;
    bool minimal = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--keep-kinds", keep_kinds, "Dependency kinds to keep (runtime, dev, other)")
            ->delimiter(',')
            ->capture_default_str();
        cmd.add_flag("--keep-prereleases", keep_prereleases, "Do not drop pre-release versions");
        cmd.add_flag("--keep-single-release", keep_single_release, "Do not drop packages with a single release");
        cmd.add_flag("--keep-isolated", keep_isolated, "Do not drop packages without dependencies in either direction");
        cmd.add_option("--activity-cutoff", activity_cutoff,
                       "Drop packages with no release after this date (RFC 3339 or YYYY-MM-DD)");
        cmd.add_flag("--no-filter", minimal,
                     "Only drop what cannot be indexed (unknown targets, unparseable versions/constraints)");
    }

    FilterConfig config() const {
        if (minimal) return FilterConfig::minimal();
        FilterConfig cfg;
        cfg.keep_dep_kinds.clear();
        for (const auto& k : keep_kinds) cfg.keep_dep_kinds.insert(parse_dep_kind(k));
        cfg.exclude_prereleases = !keep_prereleases;
        cfg.drop_single_release_packages = !keep_single_release;
        cfg.drop_isolated_packages = !keep_isolated;
        if (!activity_cutoff.empty()) cfg.activity_cutoff = parse_timestamp(activity_cutoff);
        return cfg;
    }
};

json to_json(const FilterConfig& cfg) {
    json kinds = json::array();
    for (DepKind k : cfg.keep_dep_kinds) kinds.push_back(to_string(k));
    return {{"keep_dep_kinds", kinds},
            {"exclude_prereleases", cfg.exclude_prereleases},
            {"drop_single_release_packages", cfg.drop_single_release_packages},
            {"activity_cutoff", cfg.activity_cutoff ? json(format_timestamp(*cfg.activity_cutoff)) : json(nullptr)},
            {"drop_isolated_packages", cfg.drop_isolated_packages}};
}

json to_json(const FilterReport& r) {
    return {{"input_releases", r.input_releases},
            {"output_releases", r.output_releases},
            {"input_packages", r.input_packages},
            {"output_packages", r.output_packages},
            {"releases_removed",
             {{"invalid_version", r.releases_invalid_version},
              {"prerelease", r.releases_prerelease},
              {"single_release", r.releases_single_release},
              {"stale", r.releases_stale},
              {"isolated", r.releases_isolated}}},
            {"packages_removed",
             {{"single_release", r.packages_single_release},
              {"stale", r.packages_stale},
              {"isolated", r.packages_isolated}}},
            {"edges_before", r.edges_before},
            {"edges_after", r.edges_after},
            {"deps_removed",
             {{"wrong_kind", r.deps_wrong_kind},
              {"missing_target", r.deps_missing_target},
              {"bad_constraint", r.deps_bad_constraint},
              {"of_removed_releases", r.deps_of_removed_releases},
              {"dropped_target", r.deps_dropped_target}}},
            {"audit", r.audit}};
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

json input_digests(const std::vector<std::string>& inputs) {
    json out = json::array();
    for (const auto& in : inputs) {
        fs::path p(in);
        std::vector<fs::path> files;
        if (fs::is_directory(p)) {
            files = {p / "releases.csv", p / "dependencies.csv"};
        } else {
            files = {p};
            if (p.filename() == "releases.csv") files.push_back(p.parent_path() / "dependencies.csv");
        }
        for (const auto& f : files) out.push_back({{"path", f.generic_string()}, {"sha256", sha256_file(f)}});
    }
    return out;
}

std::vector<RawRecord> load_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> paths(inputs.begin(), inputs.end());
    return load(paths);
}

struct Loaded {
    std::vector<RawRecord> records;
    FilterReport report;
    PackageIndex index;
};

Loaded load_and_index(const std::vector<std::string>& inputs, const FilterConfig& cfg) {
    auto raw = load_inputs(inputs);
    auto filtered = filter(raw, cfg);
    Loaded out{std::move(filtered.records), std::move(filtered.report), {}};
    out.index = PackageIndex::build(out.records);
    return out;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

const std::array<std::string, 6> kAnalyses = {"rq1", "rq2", "rq3", "rq4", "rq5", "rq6"};

report::Tables run_analysis(const std::string& name, const PackageIndex& idx, const report::Options& opts,
                            const std::vector<LoosenLevel>& levels) {
    report::Tables tables;
    if (name == "rq1") {
        tables.series = report::rq1_proportions(idx, opts);
    } else if (name == "rq2") {
        tables.distributions = report::rq2_distributions(idx, opts);
    } else if (name == "rq3") {
        tables = report::rq3_update_stats(idx, opts);
    } else if (name == "rq4") {
        tables = report::rq4_growth(idx, opts);
    } else if (name == "rq5") {
        tables = report::rq5_changes(idx, opts);
    } else if (name == "rq6") {
        tables.series = report::rq6_whatif(idx, levels, opts);
    } else {
        throw std::invalid_argument("unknown analysis \"" + name + "\"");
    }
    return tables;
}

std::string strip_build(const semver::Version& v) {
    semver::Version copy = v;
    copy.build.clear();
    return copy.to_string();
}

int cmd_validate(const std::vector<std::string>& inputs, std::ostream& out) {
    auto records = load_inputs(inputs);
    std::size_t deps = 0;
    std::size_t bad_versions = 0;
    std::size_t bad_constraints = 0;
    for (const auto& r : records) {
        deps += r.dependencies.size();
        try {
            semver::parse_version(r.version);
        } catch (const semver::ParseError&) {
            ++bad_versions;
        }
        for (const auto& d : r.dependencies) {
            try {
                semver::parse_constraint(d.constraint);
            } catch (const semver::ParseError&) {
                ++bad_constraints;
            }
        }
    }
    out << "records: " << records.size() << "\n"
        << "dependencies: " << deps << "\n"
        << "unparseable versions: " << bad_versions << "\n"
        << "unparseable constraints: " << bad_constraints << "\n";
    return 0;
}

int cmd_filter(const std::vector<std::string>& inputs, const FilterFlags& flags, const std::string& out_dir,
               const std::string& format, std::ostream& out) {
    auto cfg = flags.config();
    auto raw = load_inputs(inputs);
    auto result = filter(raw, cfg);
    fs::path dir(out_dir);
    if (format == "jsonl") {
        write_jsonl(result.records, dir / "releases.jsonl");
    } else {
        write_csv(result.records, dir);
    }
    json doc = {{"tool_version", kToolVersion}, {"filter", to_json(cfg)}, {"report", to_json(result.report)}};
    auto report_out = open_output(dir / "filter_report.json");
    report_out << doc.dump(2) << '\n';
    out << "kept " << result.report.output_releases << " of " << result.report.input_releases << " releases, "
        << result.report.edges_after << " of " << result.report.edges_before << " dependencies\n";
    return 0;
}

int cmd_analyze(const std::string& which, const std::vector<std::string>& inputs, const FilterFlags& flags,
                const std::string& out_path, const std::vector<std::string>& loosen, bool observation_end,
                std::ostream& out) {
    std::vector<std::string> analyses;
    if (which == "all") {
        analyses.assign(kAnalyses.begin(), kAnalyses.end());
    } else if (std::find(kAnalyses.begin(), kAnalyses.end(), which) != kAnalyses.end()) {
        analyses = {which};
    } else {
        throw std::invalid_argument("unknown analysis \"" + which + "\" (rq1..rq6 or all)");
    }
    if (!loosen.empty() && which != "rq6" && which != "all") {
        throw std::invalid_argument("--loosen only applies to rq6");
    }
    std::vector<LoosenLevel> levels;
    for (const auto& l : loosen) levels.push_back(parse_loosen_level(l));
    if (levels.empty()) levels = {LoosenLevel::Patch, LoosenLevel::PatchAndMinor};

    auto cfg = flags.config();
    auto loaded = load_and_index(inputs, cfg);
    report::Options opts;
    opts.observation_end = observation_end;

    fs::path sidecar_dir;
    json outputs = json::array();
    for (const auto& name : analyses) {
        fs::path target = which == "all" ? fs::path(out_path) / (name + ".csv") : fs::path(out_path);
        auto tables = run_analysis(name, loaded.index, opts, levels);
        auto file = open_output(target);
        report::write_csv(file, tables);
        outputs.push_back(target.filename().generic_string());
        sidecar_dir = target.parent_path();
        out << "wrote " << target.generic_string() << "\n";
    }

    json level_names = json::array();
    for (LoosenLevel l : levels) level_names.push_back(to_string(l));
    json run = {{"tool_version", kToolVersion},
                {"analyses", analyses},
                {"outputs", outputs},
                {"inputs", input_digests(inputs)},
                {"filter", flags.minimal ? json("minimal") : to_json(cfg)},
                {"filter_report",
                 {{"output_releases", loaded.report.output_releases},
                  {"output_packages", loaded.report.output_packages},
                  {"edges_after", loaded.report.edges_after}}},
                {"loosen", level_names},
                {"observation_end", observation_end},
                {"notes",
                 {"A release counts as lagging when its lag is positive at its release date or at its next "
                  "release date; it is counted once.",
                  observation_end ? "Last releases use the latest corpus date as their next release date."
                                  : "Last releases of each package are excluded from lifespan analyses."}}};
    auto sidecar = open_output(sidecar_dir / "run.json");
    sidecar << run.dump(2) << '\n';
    return 0;
}

int cmd_example(const std::string& out_dir, std::ostream& out) {
    fs::path dir(out_dir);
    auto records = fixture::worked_example();
    write_csv(records, dir);
    auto expected = fixture::expected_table();
    auto file = open_output(dir / "expected_lag_table.csv");
    fixture::write_lag_table(file, expected);
    out << "wrote worked example to " << dir.generic_string() << "\n"
        << "reproduce with: laggraph lag-table --in " << dir.generic_string()
        << " --target p2 --constraint ~1.0.0 --at "
        << format_timestamp(fixture::at(2)) << ',' << format_timestamp(fixture::at(4)) << ','
        << format_timestamp(fixture::at(6)) << ',' << format_timestamp(fixture::at(9)) << "\n";
    return 0;
}

int cmd_lag_table(const std::vector<std::string>& inputs, const FilterFlags& flags, const std::string& target,
                  const std::string& constraint, const std::vector<std::string>& at, const std::string& out_path,
                  std::ostream& out) {
    auto loaded = load_and_index(inputs, flags.config());
    auto pid = loaded.index.find_package(target);
    if (!pid) throw std::invalid_argument("unknown package \"" + target + "\"");
    auto dep = Dependency::make(*pid, constraint);
    std::vector<Timestamp> times;
    for (const auto& t : at) times.push_back(parse_timestamp(t));
    auto rows = fixture::lag_table(loaded.index, dep, times);
    if (out_path.empty()) {
        fixture::write_lag_table(out, rows);
    } else {
        auto file = open_output(out_path);
        fixture::write_lag_table(file, rows);
    }
    return 0;
}

int cmd_oracle_check(const std::vector<std::string>& inputs, const FilterFlags& flags, std::size_t samples,
                     std::uint64_t seed, std::ostream& out) {
    auto loaded = load_and_index(inputs, flags.config());
    const PackageIndex& idx = loaded.index;
    oracle::BruteForceCorpus reference(loaded.records);
    std::mt19937_64 rng(seed);
    const auto lo = idx.earliest().time_since_epoch().count();
    const auto hi = (idx.latest() + days(30)).time_since_epoch().count();
    std::uniform_int_distribution<std::int64_t> pick(lo, std::max(lo, hi));

    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::size_t mismatches = 0;
    for (const auto& rec : loaded.records) {
        auto rid = idx.find_release(rec.package, rec.version);
        if (!rid) continue;
        const Release& rel = idx.release(*rid);
        std::vector<Timestamp> times = {rel.date};
        if (auto next = next_release_date(*rid, idx)) times.push_back(*next);
        for (std::size_t i = 0; i < samples; ++i) times.push_back(Timestamp{Duration{pick(rng)}});
        for (std::size_t i = 0; i < rec.dependencies.size(); ++i) {
            const auto& raw = rec.dependencies[i];
            for (Timestamp t : times) {
                auto expected = reference.evaluate(raw.target, raw.constraint, t);
                if (!expected) {
                    ++skipped;
                    continue;
                }
                ++checked;
                std::vector<std::string> got_missed;
                for (ReleaseId m : missed(rel.deps[i], t, idx)) got_missed.push_back(strip_build(idx.release(m).version));
                Duration got_lag = dep_lag(rel.deps[i], t, idx);
                if (got_lag != expected->lag || got_missed != expected->missed) {
                    if (mismatches < 20) {
                        out << "mismatch: " << rec.package << "@" << rec.version << " -> " << raw.target << " \""
                            << raw.constraint << "\" at " << format_timestamp(t) << ": lag " << got_lag.count()
                            << "s vs " << expected->lag.count() << "s\n";
                    }
                    ++mismatches;
                }
            }
        }
    }
    out << "checked " << checked << " evaluations, skipped " << skipped << " (constraint outside reference grammar), "
        << mismatches << " mismatches\n";
    return mismatches == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Technical lag analysis over package dependency networks", "laggraph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::vector<std::string> inputs;
    FilterFlags flags;

    auto* validate = app.add_subcommand("validate", "Check input files against the schema");
    validate->add_option("inputs", inputs, "Input directories or .jsonl files")->required();

    std::string out_path;
    std::string format = "csv";
    auto* filter_cmd = app.add_subcommand("filter", "Apply the filtering pipeline and write the filtered corpus");
    filter_cmd->add_option("--in", inputs, "Input directories or .jsonl files")->required();
    filter_cmd->add_option("--out", out_path, "Output directory")->required();
    filter_cmd->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    flags.attach(*filter_cmd);

    std::string which;
    std::vector<std::string> loosen;
    bool observation_end = false;
    auto* analyze = app.add_subcommand("analyze", "Compute an analysis and write it as CSV");
    analyze->add_option("analysis", which, "rq1, rq2, rq3, rq4, rq5, rq6 or all")->required();
    analyze->add_option("--in", inputs, "Input directories or .jsonl files")->required();
    analyze->add_option("--out", out_path, "Output CSV (a directory for 'all')")->required();
    analyze->add_option("--loosen", loosen, "rq6 loosening level(s): none, patch, minor")->delimiter(',');
    analyze->add_flag("--observation-end", observation_end,
                      "Use the latest corpus date as the next release date of last releases");
    flags.attach(*analyze);

    auto* example = app.add_subcommand("example", "Write the built-in worked example and its expected lag table");
    example->add_option("--out", out_path, "Output directory")->required();

    std::string target;
    std::string constraint;
    std::vector<std::string> at;
    auto* lag_table = app.add_subcommand("lag-table", "Installable maximum, missed set and lag of one dependency");
    lag_table->add_option("--in", inputs, "Input directories or .jsonl files")->required();
    lag_table->add_option("--target", target, "Target package")->required();
    lag_table->add_option("--constraint", constraint, "Dependency constraint")->required();
    lag_table->add_option("--at", at, "Evaluation times (RFC 3339), comma separated")->delimiter(',')->required();
    lag_table->add_option("--out", out_path, "Output CSV (default: stdout)");
    flags.attach(*lag_table);

    std::size_t samples = 10;
    std::uint64_t seed = 1;
    auto* oracle_check = app.add_subcommand("oracle-check", "Differential check against the brute-force reference");
    oracle_check->add_option("--in", inputs, "Input directories or .jsonl files")->required();
    oracle_check->add_option("--samples", samples, "Random evaluation times per release")->capture_default_str();
    oracle_check->add_option("--seed", seed, "Random seed")->capture_default_str();
    flags.attach(*oracle_check);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*validate) return cmd_validate(inputs, out);
        if (*filter_cmd) return cmd_filter(inputs, flags, out_path, format, out);
        if (*analyze) return cmd_analyze(which, inputs, flags, out_path, loosen, observation_end, out);
        if (*example) return cmd_example(out_path, out);
        if (*lag_table) return cmd_lag_table(inputs, flags, target, constraint, at, out_path, out);
        if (*oracle_check) return cmd_oracle_check(inputs, flags, samples, seed, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace laggraph::cli
