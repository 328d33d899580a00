#include <doctest.h>

#include <algorithm>

#include <laggraph/fixture.hpp>
#include <laggraph/lag.hpp>
#include <laggraph/whatif.hpp>

#include "support/generators.hpp"

using namespace laggraph;
using fixture::at;

namespace {

std::vector<std::string> versions_of(const PackageIndex& idx, const std::vector<ReleaseId>& ids) {
    std::vector<std::string> out;
    for (ReleaseId r : ids) out.push_back(idx.release(r).version.to_string());
    return out;
}

}  // namespace

TEST_CASE("level names") {
    CHECK(parse_loosen_level("none") == LoosenLevel::None);
    CHECK(parse_loosen_level("patch") == LoosenLevel::Patch);
    CHECK(parse_loosen_level("minor") == LoosenLevel::PatchAndMinor);
    CHECK(to_string(LoosenLevel::PatchAndMinor) == "minor");
    CHECK_THROWS_AS(parse_loosen_level("major"), std::invalid_argument);
}

TEST_CASE("loosened installable sets on the worked example") {
    auto idx = PackageIndex::build(fixture::worked_example());
    auto pinned = Dependency::make(*idx.find_package("p2"), "=1.0.0");
    CHECK(versions_of(idx, installable(pinned, at(9), idx)) == std::vector<std::string>{"1.0.0"});
    CHECK(versions_of(idx, installable_loosened(pinned, at(9), LoosenLevel::Patch, idx)) ==
          std::vector<std::string>{"1.0.0", "1.0.1", "1.0.2"});
    CHECK(versions_of(idx, installable_loosened(pinned, at(9), LoosenLevel::PatchAndMinor, idx)) ==
          std::vector<std::string>{"1.0.0", "1.0.1", "1.0.2", "1.1.0"});
    CHECK(installable_loosened(pinned, at(9), LoosenLevel::None, idx) == installable(pinned, at(9), idx));
}

TEST_CASE("loosened lag on the worked example") {
    auto idx = PackageIndex::build(fixture::worked_example());
    const Release& r1 = idx.release(*idx.find_release("p1", "1.0.0"));
    CHECK(lag_loosened(r1, at(9), LoosenLevel::PatchAndMinor, idx) == Duration{0});
    CHECK(lag_loosened(r1, at(9), LoosenLevel::Patch, idx) == at(9) - at(5));
    CHECK(lag_loosened(r1, at(9), LoosenLevel::None, idx) == release_lag(r1, at(9), idx));

    // Only 2.0.0 is missed under ^1.0.0, and no loosening admits a new major.
    auto caret = Dependency::make(*idx.find_package("p2"), "^1.0.0");
    CHECK(dep_lag_loosened(caret, at(12), LoosenLevel::Patch, idx) == dep_lag(caret, at(12), idx));
    CHECK(dep_lag_loosened(caret, at(12), LoosenLevel::PatchAndMinor, idx) == days(3));
}

TEST_CASE("0.x targets use plain component equality") {
    std::vector<RawRecord> records = {
        {"a", "1.0.0", at(1), {{"z", "^0.1.0", DepKind::Runtime}}, {}},
        {"z", "0.1.0", at(1), {}, {}},
        {"z", "0.2.0", at(2), {}, {}},
    };
    auto idx = PackageIndex::build(records);
    const Release& a = idx.release(*idx.find_release("a", "1.0.0"));
    CHECK(release_lag(a, at(3), idx) == days(1));
    CHECK(lag_loosened(a, at(3), LoosenLevel::Patch, idx) == days(1));
    CHECK(lag_loosened(a, at(3), LoosenLevel::PatchAndMinor, idx) == Duration{0});
}

TEST_CASE("loosening is pointwise dominated") {
    testgen::Rng rng(606);
    for (int round = 0; round < 60; ++round) {
        auto idx = PackageIndex::build(testgen::random_corpus(rng));
        auto times = testgen::random_times(rng, 8);
        for (const Release& rel : idx.releases()) {
            for (const auto& d : rel.deps) {
                for (Timestamp t : times) {
                    auto base = installable(d, t, idx);
                    auto patch = installable_loosened(d, t, LoosenLevel::Patch, idx);
                    auto minor = installable_loosened(d, t, LoosenLevel::PatchAndMinor, idx);
                    CHECK(std::includes(patch.begin(), patch.end(), base.begin(), base.end(),
                                        [&](ReleaseId x, ReleaseId y) { return idx.release(x).version < idx.release(y).version; }));
                    CHECK(std::includes(minor.begin(), minor.end(), patch.begin(), patch.end(),
                                        [&](ReleaseId x, ReleaseId y) { return idx.release(x).version < idx.release(y).version; }));
                    Duration b = dep_lag(d, t, idx);
                    Duration p = dep_lag_loosened(d, t, LoosenLevel::Patch, idx);
                    Duration m = dep_lag_loosened(d, t, LoosenLevel::PatchAndMinor, idx);
                    CHECK(m <= p);
                    CHECK(p <= b);
                    CHECK(dep_lag_loosened(d, t, LoosenLevel::None, idx) == b);
                }
            }
        }
    }
}
