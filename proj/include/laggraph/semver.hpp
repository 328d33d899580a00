#pragma once

// Semantic versions and npm-style dependency constraints.
//
// Supported constraint grammar: exact versions, the comparators = < <= > >=,
// hyphen ranges (1.2.3 - 2.0.0), x-ranges (1.x, 1.2.*, *), tilde (~, ~>),
// caret (^), whitespace conjunction and "||" alternation. "" and "latest"
// match any release. Everything else (URLs, git refs, dist-tags) is rejected.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace laggraph::semver {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string text)
        : std::runtime_error(what + ": \"" + text + "\""), text_(std::move(text)) {}

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

/// One dot-separated pre-release identifier.
struct PrereleaseId {
    bool numeric = false;
    std::uint64_t number = 0;
    std::string text;  // set when !numeric

    friend bool operator==(const PrereleaseId&, const PrereleaseId&) = default;
};

struct Version {
    std::uint64_t major = 0;
    std::uint64_t minor = 0;
    std::uint64_t patch = 0;
    std::vector<PrereleaseId> prerelease;
    std::string build;  // kept for display, ignored for precedence
    std::string raw;

    bool is_prerelease() const noexcept { return !prerelease.empty(); }
    bool same_triple(const Version& other) const noexcept {
        return major == other.major && minor == other.minor && patch == other.patch;
    }

    /// Canonical form "M.m.p[-pre][+build]".
    std::string to_string() const;
};

/// Version precedence. Build metadata and the raw text do not participate.
std::strong_ordering compare(const Version& a, const Version& b);

inline std::strong_ordering operator<=>(const Version& a, const Version& b) { return compare(a, b); }
inline bool operator==(const Version& a, const Version& b) { return compare(a, b) == 0; }

enum class Op { Eq, Lt, Le, Gt, Ge };

struct Comparator {
    Op op = Op::Eq;
    Version version;
    // Bounds such as "<2.0.0-0" produced while desugaring ^, ~ and x-ranges.
    // They never admit a pre-release version on their own triple.
    bool synthetic = false;

    bool test(const Version& v) const;
    std::string to_string() const;
};

/// Conjunction of comparators. Empty means "any version".
using ComparatorSet = std::vector<Comparator>;

struct Constraint {
    std::vector<ComparatorSet> alternatives;
    std::string raw;

    bool matches_any() const;
    /// Normalized form, e.g. ">=1.0.0 <1.1.0-0 || =2.0.0". Match-any prints "*".
    std::string to_string() const;
};

enum class ReleaseType { Major, Minor, Patch, Initial };

std::string_view to_string(ReleaseType type);

/// Accepts an optional leading "v"/"V" and surrounding whitespace.
Version parse_version(std::string_view text);

Constraint parse_constraint(std::string_view text);

/// npm semantics: a pre-release version only satisfies a comparator set that
/// itself names a pre-release on the same (major, minor, patch) triple.
bool satisfies(const Version& v, const Constraint& c);

/// Release type of `curr` relative to its version-order predecessor.
ReleaseType classify(const Version& curr, const Version& prev);
inline ReleaseType classify(const Version&) { return ReleaseType::Initial; }

}  // namespace laggraph::semver
