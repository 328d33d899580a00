#pragma once

// The two-package worked example: p1@1.0.0 depends on p2 with "~1.0.0" and
// p1@1.1.0 (published at T9) switches to "^1.0.0". T_i is day i after
// 2017-01-01T00:00:00Z.

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "laggraph/corpus.hpp"
#include "laggraph/index.hpp"

namespace laggraph::fixture {

Timestamp at(int day);

/// p2: 1.0.0@T1, 1.0.1@T3, 1.1.0@T5, 1.0.2@T8, 2.0.0@T9.
std::vector<RawRecord> worked_example();

struct LagRow {
    Timestamp time;
    std::optional<std::string> max_installable;
    std::vector<std::string> missed;  // version order
    Duration lag{0};

    friend bool operator==(const LagRow&, const LagRow&) = default;
};

/// Installable maximum, missed set and lag of `dep` at each time point.
std::vector<LagRow> lag_table(const PackageIndex& idx, const Dependency& dep, std::span<const Timestamp> times);

/// Expected rows for (p2, ~1.0.0) at T2, T4, T6, T9.
std::vector<LagRow> expected_table();

/// CSV "time,max_installable,missed,lag_days"; missed versions are joined by ';'.
void write_lag_table(std::ostream& out, std::span<const LagRow> rows);

}  // namespace laggraph::fixture
