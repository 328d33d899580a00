#include "laggraph/fixture.hpp"

#include <cstdio>

#include "laggraph/lag.hpp"

namespace laggraph::fixture {

Timestamp at(int day) { return parse_timestamp("2017-01-01T00:00:00Z") + days(day); }

std::vector<RawRecord> worked_example() {
    auto rec = [](std::string package, std::string version, int day, std::vector<RawDependency> deps = {}) {
        RawRecord r;
        r.package = std::move(package);
        r.version = std::move(version);
        r.date = at(day);
        r.dependencies = std::move(deps);
        r.origin = "worked-example";
        return r;
    };
    return {
        rec("p1", "1.0.0", 1, {{"p2", "~1.0.0", DepKind::Runtime}}),
        rec("p1", "1.1.0", 9, {{"p2", "^1.0.0", DepKind::Runtime}}),
        rec("p2", "1.0.0", 1),
        rec("p2", "1.0.1", 3),
        rec("p2", "1.1.0", 5),
        rec("p2", "1.0.2", 8),
        rec("p2", "2.0.0", 9),
    };
}

std::vector<LagRow> lag_table(const PackageIndex& idx, const Dependency& dep, std::span<const Timestamp> times) {
    std::vector<LagRow> rows;
    for (Timestamp t : times) {
        LagRow row;
        row.time = t;
        Resolution res = resolve(dep, t, idx);
        if (res.max_installable) row.max_installable = idx.release(*res.max_installable).version.to_string();
        for (ReleaseId id : missed(dep, t, idx)) row.missed.push_back(idx.release(id).version.to_string());
        row.lag = res.lag(t);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LagRow> expected_table() {
    return {
        {at(2), "1.0.0", {}, days(0)},
        {at(4), "1.0.1", {}, days(0)},
        {at(6), "1.0.1", {"1.1.0"}, at(6) - at(5)},
        {at(9), "1.0.2", {"1.1.0", "2.0.0"}, at(9) - at(5)},
    };
}

void write_lag_table(std::ostream& out, std::span<const LagRow> rows) {
    out << "time,max_installable,missed,lag_days\n";
    for (const auto& row : rows) {
        std::string missed;
        for (std::size_t i = 0; i < row.missed.size(); ++i) {
            if (i > 0) missed += ';';
            missed += row.missed[i];
        }
        char lag[64];
        std::snprintf(lag, sizeof lag, "%.6f", to_days(row.lag));
        out << format_timestamp(row.time) << ',' << row.max_installable.value_or("") << ',' << missed << ',' << lag
            << '\n';
    }
}

}  // namespace laggraph::fixture
