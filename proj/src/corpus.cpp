#include "laggraph/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "laggraph/csv.hpp"
#include "laggraph/semver.hpp"

namespace laggraph {

namespace fs = std::filesystem;

std::string_view to_string(DepKind kind) {
    switch (kind) {
        case DepKind::Runtime: return "runtime";
        case DepKind::Dev: return "dev";
        case DepKind::Other: return "other";
    }
    return "?";
}

DepKind parse_dep_kind(std::string_view text) {
    if (text == "runtime") return DepKind::Runtime;
    if (text == "dev") return DepKind::Dev;
    if (text == "other") return DepKind::Other;
    throw std::invalid_argument("unknown dependency kind \"" + std::string(text) + "\"");
}

namespace {

using ReleaseKey = std::pair<std::string, std::string>;

struct KeyHash {
    std::size_t operator()(const ReleaseKey& k) const {
        return std::hash<std::string>{}(k.first) * 31 + std::hash<std::string>{}(k.second);
    }
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

// Maps the required column names to their positions in the header row.
std::vector<std::size_t> resolve_header(csv::Reader& reader, const fs::path& path,
                                        std::initializer_list<std::string_view> required) {
    auto header = reader.next();
    if (!header) throw SchemaError(path.string(), 1, "missing header row");
    std::vector<std::size_t> positions;
    for (std::string_view name : required) {
        auto it = std::find(header->begin(), header->end(), name);
        if (it == header->end()) {
            throw SchemaError(path.string(), reader.line(), "header lacks column \"" + std::string(name) + "\"");
        }
        positions.push_back(static_cast<std::size_t>(it - header->begin()));
    }
    return positions;
}

const std::string& field(const std::vector<std::string>& row, std::size_t pos, std::string_view name,
                         const fs::path& path, std::size_t line) {
    if (pos >= row.size()) {
        throw SchemaError(path.string(), line, "row lacks column \"" + std::string(name) + "\"");
    }
    return row[pos];
}

Timestamp date_field(const std::string& text, const fs::path& path, std::size_t line) {
    if (text.empty()) throw SchemaError(path.string(), line, "empty date");
    try {
        return parse_timestamp(text);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path.string(), line, e.what());
    }
}

void reject_duplicates(const std::vector<RawRecord>& records) {
    std::unordered_map<ReleaseKey, std::size_t, KeyHash> seen;
    seen.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto [it, fresh] = seen.emplace(ReleaseKey{records[i].package, records[i].version}, i);
        if (!fresh) {
            const RawRecord& first = records[it->second];
            throw DuplicateError("duplicate release " + first.package + "@" + first.version + " at " +
                                 first.origin + " and " + records[i].origin);
        }
    }
}

}  // namespace

std::vector<RawRecord> load_csv(const fs::path& releases, const fs::path& dependencies) {
    std::vector<RawRecord> records;
    std::unordered_map<ReleaseKey, std::size_t, KeyHash> by_key;
    {
        auto in = open_input(releases);
        csv::Reader reader(in);
        auto cols = resolve_header(reader, releases, {"package", "version", "date"});
        while (auto row = reader.next()) {
            std::size_t line = reader.line();
            RawRecord rec;
            rec.package = field(*row, cols[0], "package", releases, line);
            rec.version = field(*row, cols[1], "version", releases, line);
            rec.date = date_field(field(*row, cols[2], "date", releases, line), releases, line);
            if (rec.package.empty()) throw SchemaError(releases.string(), line, "empty package id");
            if (rec.version.empty()) throw SchemaError(releases.string(), line, "empty version");
            rec.origin = releases.string() + ":" + std::to_string(line);
            auto [it, fresh] = by_key.emplace(ReleaseKey{rec.package, rec.version}, records.size());
            if (!fresh) {
                throw DuplicateError("duplicate release " + rec.package + "@" + rec.version + " at " +
                                     records[it->second].origin + " and " + rec.origin);
            }
            records.push_back(std::move(rec));
        }
    }
    {
        auto in = open_input(dependencies);
        csv::Reader reader(in);
        auto cols = resolve_header(reader, dependencies, {"package", "version", "target", "constraint", "kind"});
        while (auto row = reader.next()) {
            std::size_t line = reader.line();
            ReleaseKey key{field(*row, cols[0], "package", dependencies, line),
                           field(*row, cols[1], "version", dependencies, line)};
            auto it = by_key.find(key);
            if (it == by_key.end()) {
                throw SchemaError(dependencies.string(), line,
                                  "dependency of unknown release " + key.first + "@" + key.second);
            }
            RawDependency dep;
            dep.target = field(*row, cols[2], "target", dependencies, line);
            dep.constraint = field(*row, cols[3], "constraint", dependencies, line);
            if (dep.target.empty()) throw SchemaError(dependencies.string(), line, "empty target");
            try {
                dep.kind = parse_dep_kind(field(*row, cols[4], "kind", dependencies, line));
            } catch (const std::invalid_argument& e) {
                throw SchemaError(dependencies.string(), line, e.what());
            }
            records[it->second].dependencies.push_back(std::move(dep));
        }
    }
    return records;
}

std::vector<RawRecord> load_jsonl(const fs::path& path) {
    using nlohmann::json;
    auto in = open_input(path);
    std::vector<RawRecord> records;
    std::string line;
    std::size_t lineno = 0;
    auto string_member = [&](const json& obj, const char* name) -> std::string {
        auto it = obj.find(name);
        if (it == obj.end() || !it->is_string()) {
            throw SchemaError(path.string(), lineno, std::string("missing string member \"") + name + "\"");
        }
        return it->get<std::string>();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(path.string(), lineno, e.what());
        }
        if (!obj.is_object()) throw SchemaError(path.string(), lineno, "expected a JSON object");
        RawRecord rec;
        rec.package = string_member(obj, "package");
        rec.version = string_member(obj, "version");
        rec.date = date_field(string_member(obj, "date"), path, lineno);
        if (rec.package.empty()) throw SchemaError(path.string(), lineno, "empty package id");
        if (rec.version.empty()) throw SchemaError(path.string(), lineno, "empty version");
        rec.origin = path.string() + ":" + std::to_string(lineno);
        if (auto deps = obj.find("dependencies"); deps != obj.end()) {
            if (!deps->is_array()) throw SchemaError(path.string(), lineno, "\"dependencies\" must be an array");
            for (const auto& d : *deps) {
                if (!d.is_object()) throw SchemaError(path.string(), lineno, "dependency must be an object");
                RawDependency dep;
                dep.target = string_member(d, "target");
                dep.constraint = string_member(d, "constraint");
                if (dep.target.empty()) throw SchemaError(path.string(), lineno, "empty target");
                try {
                    dep.kind = parse_dep_kind(string_member(d, "kind"));
                } catch (const std::invalid_argument& e) {
                    throw SchemaError(path.string(), lineno, e.what());
                }
                rec.dependencies.push_back(std::move(dep));
            }
        }
        records.push_back(std::move(rec));
    }
    reject_duplicates(records);
    return records;
}

std::vector<RawRecord> load(std::span<const fs::path> paths) {
    std::vector<RawRecord> all;
    for (const auto& path : paths) {
        std::vector<RawRecord> part;
        if (fs::is_directory(path)) {
            part = load_csv(path / "releases.csv", path / "dependencies.csv");
        } else if (path.extension() == ".jsonl" || path.extension() == ".json") {
            part = load_jsonl(path);
        } else if (path.filename() == "releases.csv") {
            part = load_csv(path, path.parent_path() / "dependencies.csv");
        } else if (!fs::exists(path)) {
            throw std::runtime_error("no such input: " + path.string());
        } else {
            throw std::runtime_error("unrecognized input (expected a directory or .jsonl file): " + path.string());
        }
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    reject_duplicates(all);
    return all;
}

namespace {

std::vector<const RawRecord*> sorted_view(std::span<const RawRecord> records) {
    std::vector<const RawRecord*> view;
    view.reserve(records.size());
    for (const auto& r : records) view.push_back(&r);
    std::sort(view.begin(), view.end(), [](const RawRecord* a, const RawRecord* b) {
        return std::tie(a->package, a->date, a->version) < std::tie(b->package, b->date, b->version);
    });
    return view;
}

}  // namespace

void write_csv(std::span<const RawRecord> records, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream rel(dir / "releases.csv", std::ios::binary);
    std::ofstream deps(dir / "dependencies.csv", std::ios::binary);
    if (!rel || !deps) throw std::runtime_error("cannot write into " + dir.string());
    csv::write_row(rel, {"package", "version", "date"});
    csv::write_row(deps, {"package", "version", "target", "constraint", "kind"});
    for (const RawRecord* r : sorted_view(records)) {
        csv::write_row(rel, {r->package, r->version, format_timestamp(r->date)});
        for (const auto& d : r->dependencies) {
            csv::write_row(deps, {r->package, r->version, d.target, d.constraint, std::string(to_string(d.kind))});
        }
    }
}

void write_jsonl(std::span<const RawRecord> records, const fs::path& path) {
    using nlohmann::json;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const RawRecord* r : sorted_view(records)) {
        json deps = json::array();
        for (const auto& d : r->dependencies) {
            deps.push_back({{"target", d.target}, {"constraint", d.constraint}, {"kind", to_string(d.kind)}});
        }
        json obj = {{"package", r->package},
                    {"version", r->version},
                    {"date", format_timestamp(r->date)},
                    {"dependencies", std::move(deps)}};
        out << obj.dump() << '\n';
    }
}

FilterConfig FilterConfig::minimal() {
    FilterConfig cfg;
    cfg.keep_dep_kinds = {DepKind::Runtime, DepKind::Dev, DepKind::Other};
    cfg.exclude_prereleases = false;
    cfg.drop_single_release_packages = false;
    cfg.drop_isolated_packages = false;
    return cfg;
}

FilterResult filter(std::span<const RawRecord> records, const FilterConfig& cfg) {
    FilterReport report;
    report.input_releases = records.size();

    struct Work {
        std::vector<RawDependency> deps;
        std::optional<semver::Version> version;
        bool alive = true;
    };
    std::vector<Work> work(records.size());

    std::unordered_set<std::string> all_packages;
    for (const auto& r : records) {
        all_packages.insert(r.package);
        report.edges_before += r.dependencies.size();
    }
    report.input_packages = all_packages.size();

    // Dependency kinds, unknown targets, unparseable constraints.
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (const auto& d : records[i].dependencies) {
            if (!cfg.keep_dep_kinds.contains(d.kind)) {
                ++report.deps_wrong_kind;
            } else if (!all_packages.contains(d.target)) {
                ++report.deps_missing_target;
            } else {
                try {
                    semver::parse_constraint(d.constraint);
                    work[i].deps.push_back(d);
                } catch (const semver::ParseError& e) {
                    ++report.deps_bad_constraint;
                    report.audit.push_back("dropped dependency " + records[i].package + "@" + records[i].version +
                                           " -> " + d.target + ": " + e.what());
                }
            }
        }
    }

    // Versions: unparseable, pre-release, or equal in precedence to another
    // release of the same package (only the earliest is kept).
    std::map<std::string, std::vector<std::size_t>> by_package;
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            work[i].version = semver::parse_version(records[i].version);
        } catch (const semver::ParseError& e) {
            work[i].alive = false;
            ++report.releases_invalid_version;
            report.audit.push_back("dropped release " + records[i].package + "@" + records[i].version + ": " +
                                   e.what());
            continue;
        }
        if (cfg.exclude_prereleases && work[i].version->is_prerelease()) {
            work[i].alive = false;
            ++report.releases_prerelease;
            continue;
        }
        by_package[records[i].package].push_back(i);
    }
    for (auto& [name, ids] : by_package) {
        std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
            if (auto c = semver::compare(*work[a].version, *work[b].version); c != 0) return c < 0;
            return std::tie(records[a].date, records[a].version) < std::tie(records[b].date, records[b].version);
        });
        std::vector<std::size_t> kept;
        for (std::size_t id : ids) {
            if (!kept.empty() && *work[kept.back()].version == *work[id].version) {
                work[id].alive = false;
                ++report.releases_invalid_version;
                report.audit.push_back("dropped release " + name + "@" + records[id].version +
                                       ": same precedence as " + records[kept.back()].version);
                continue;
            }
            kept.push_back(id);
        }
        ids = std::move(kept);
    }

    auto kill_package = [&](std::vector<std::size_t>& ids, std::size_t& release_counter) {
        for (std::size_t id : ids) work[id].alive = false;
        release_counter += ids.size();
        ids.clear();
    };

    if (cfg.drop_single_release_packages) {
        for (auto& [name, ids] : by_package) {
            if (ids.size() == 1) {
                kill_package(ids, report.releases_single_release);
                ++report.packages_single_release;
            }
        }
    }

    if (cfg.activity_cutoff) {
        for (auto& [name, ids] : by_package) {
            if (ids.empty()) continue;
            bool active = std::any_of(ids.begin(), ids.end(),
                                      [&](std::size_t id) { return records[id].date > *cfg.activity_cutoff; });
            if (!active) {
                kill_package(ids, report.releases_stale);
                ++report.packages_stale;
            }
        }
    }

    // Edges of dead releases go with them; edges into dead packages are cut.
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!work[i].alive) {
            report.deps_of_removed_releases += work[i].deps.size();
            work[i].deps.clear();
        }
    }
    auto package_alive = [&](const std::string& name) {
        auto it = by_package.find(name);
        return it != by_package.end() && !it->second.empty();
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!work[i].alive) continue;
        auto& deps = work[i].deps;
        auto end = std::remove_if(deps.begin(), deps.end(),
                                  [&](const RawDependency& d) { return !package_alive(d.target); });
        report.deps_dropped_target += static_cast<std::size_t>(deps.end() - end);
        deps.erase(end, deps.end());
    }

    if (cfg.drop_isolated_packages) {
        std::unordered_set<std::string> connected;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (!work[i].alive || work[i].deps.empty()) continue;
            connected.insert(records[i].package);
            for (const auto& d : work[i].deps) connected.insert(d.target);
        }
        for (auto& [name, ids] : by_package) {
            if (!ids.empty() && !connected.contains(name)) {
                kill_package(ids, report.releases_isolated);
                ++report.packages_isolated;
            }
        }
    }

    FilterResult result;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!work[i].alive) continue;
        RawRecord rec = records[i];
        rec.dependencies = std::move(work[i].deps);
        report.edges_after += rec.dependencies.size();
        result.records.push_back(std::move(rec));
    }
    report.output_releases = result.records.size();
    report.output_packages = static_cast<std::size_t>(
        std::count_if(by_package.begin(), by_package.end(), [](const auto& kv) { return !kv.second.empty(); }));
    result.report = std::move(report);
    return result;
}

}  // namespace laggraph
