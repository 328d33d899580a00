#pragma once

// Reference semver evaluator for differential testing.
//
// Each comparator set of a constraint is expanded into one explicit version
// interval; membership is tested directly against the interval bounds.
// Covers: "*", "", exact versions, = < <= > >= ~ ^ on full versions, bare
// x-ranges (1.x, 1.2.x), whitespace conjunction and "||". Anything else is
// reported as unsupported rather than guessed.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace laggraph::oracle {

struct OracleVersion {
    std::uint64_t major = 0;
    std::uint64_t minor = 0;
    std::uint64_t patch = 0;
    std::vector<std::string> pre;
    // Sits below every version on the same triple, pre-releases included.
    bool floor = false;
};

/// -1, 0 or 1.
int order(const OracleVersion& a, const OracleVersion& b);

std::optional<OracleVersion> read_version(std::string_view text);

struct Interval {
    std::optional<OracleVersion> low;
    bool low_inclusive = true;
    std::optional<OracleVersion> high;
    bool high_inclusive = true;
    // Pre-release versions spelled out in the comparator set.
    std::vector<OracleVersion> named_prereleases;
};

struct Expansion {
    std::vector<Interval> alternatives;
};

/// nullopt when the text falls outside the supported grammar.
std::optional<Expansion> expand(std::string_view constraint);

bool contains(const Expansion& e, const OracleVersion& v);

}  // namespace laggraph::oracle
