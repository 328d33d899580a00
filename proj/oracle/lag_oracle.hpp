#pragma once

// Reference lag computation straight from the definitions, over raw records:
// enumerate every release of the target, keep those dated at or before t,
// test the constraint with the reference semver evaluator, and derive the
// missed set and lag with no index, ordering cache or early exit.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <laggraph/corpus.hpp>

#include "semver_oracle.hpp"

namespace laggraph::oracle {

struct OracleRelease {
    std::string version_text;
    OracleVersion version;
    Timestamp date;
};

struct OracleOutcome {
    std::optional<std::string> max_installable;  // canonical "M.m.p[-pre]"
    std::vector<std::string> missed;              // version order
    Duration lag{0};
};

class BruteForceCorpus {
public:
    /// Records whose version the reference reader cannot parse are ignored.
    explicit BruteForceCorpus(std::span<const RawRecord> records);

    /// nullopt when the constraint is outside the reference grammar.
    std::optional<OracleOutcome> evaluate(const std::string& target, const std::string& constraint,
                                          Timestamp t) const;

private:
    std::map<std::string, std::vector<OracleRelease>> releases_;
};

std::string canonical(const OracleVersion& v);

}  // namespace laggraph::oracle
