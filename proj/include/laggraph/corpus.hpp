#pragma once

// Raw registry metadata: loading, writing and the filtering pipeline that
// turns a registry dump into the corpus the lag analyses run on.

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "laggraph/time.hpp"

namespace laggraph {

enum class DepKind { Runtime, Dev, Other };

std::string_view to_string(DepKind kind);
/// "runtime" | "dev" | "other"; throws std::invalid_argument otherwise.
DepKind parse_dep_kind(std::string_view text);

struct RawDependency {
    std::string target;
    std::string constraint;
    DepKind kind = DepKind::Runtime;

    friend bool operator==(const RawDependency&, const RawDependency&) = default;
};

struct RawRecord {
    std::string package;
    std::string version;
    Timestamp date;
    std::vector<RawDependency> dependencies;
    // "file:line" of the defining row; diagnostics only.
    std::string origin;
};

/// Input does not conform to the schema. Carries the file and 1-based line.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string file, std::size_t line, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

class DuplicateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// releases.csv (package,version,date) + dependencies.csv
/// (package,version,target,constraint,kind).
std::vector<RawRecord> load_csv(const std::filesystem::path& releases,
                                const std::filesystem::path& dependencies);

/// One JSON object per line:
/// {"package":..,"version":..,"date":..,"dependencies":[{"target":..,"constraint":..,"kind":..}]}
std::vector<RawRecord> load_jsonl(const std::filesystem::path& path);

/// Each path is either a directory holding releases.csv and dependencies.csv
/// or a .jsonl file. Records of all paths are concatenated; a (package,
/// version) pair defined twice raises DuplicateError naming both origins.
std::vector<RawRecord> load(std::span<const std::filesystem::path> paths);

/// Writes releases.csv and dependencies.csv into `dir` (created if missing),
/// sorted by package, date and version for stable output.
void write_csv(std::span<const RawRecord> records, const std::filesystem::path& dir);
void write_jsonl(std::span<const RawRecord> records, const std::filesystem::path& path);

struct FilterConfig {
    std::set<DepKind> keep_dep_kinds{DepKind::Runtime};
    bool exclude_prereleases = true;
    bool drop_single_release_packages = true;
    /// Packages without any release strictly after this instant are dropped.
    std::optional<Timestamp> activity_cutoff;
    bool drop_isolated_packages = true;

    /// Only the rules needed to build a consistent index: no dependency-kind,
    /// pre-release or package-level pruning.
    static FilterConfig minimal();
};

/// Removal counts per rule. A release (or dependency) is counted once, under
/// the first rule that removes it.
struct FilterReport {
    std::size_t input_releases = 0;
    std::size_t output_releases = 0;
    std::size_t input_packages = 0;
    std::size_t output_packages = 0;

    std::size_t releases_invalid_version = 0;
    std::size_t releases_prerelease = 0;
    std::size_t releases_single_release = 0;
    std::size_t releases_stale = 0;
    std::size_t releases_isolated = 0;

    std::size_t packages_single_release = 0;
    std::size_t packages_stale = 0;
    std::size_t packages_isolated = 0;

    std::size_t edges_before = 0;
    std::size_t edges_after = 0;
    std::size_t deps_wrong_kind = 0;
    std::size_t deps_missing_target = 0;
    std::size_t deps_bad_constraint = 0;
    std::size_t deps_of_removed_releases = 0;
    /// Edges of surviving releases whose target package was dropped.
    std::size_t deps_dropped_target = 0;

    /// One line per dependency dropped for an unparseable constraint or
    /// release dropped for an unparseable version.
    std::vector<std::string> audit;

    std::size_t releases_removed() const {
        return releases_invalid_version + releases_prerelease + releases_single_release +
               releases_stale + releases_isolated;
    }
    std::size_t deps_removed() const {
        return deps_wrong_kind + deps_missing_target + deps_bad_constraint +
               deps_of_removed_releases + deps_dropped_target;
    }
};

struct FilterResult {
    std::vector<RawRecord> records;
    FilterReport report;
};

/// Applies, in order: dependency kinds, unknown targets (and unparseable
/// constraints), unparseable/pre-release versions, single-release packages,
/// inactive packages, isolated packages. Surviving records keep input order.
FilterResult filter(std::span<const RawRecord> records, const FilterConfig& cfg);

}  // namespace laggraph
