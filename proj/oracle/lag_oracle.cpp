#include "lag_oracle.hpp"

#include <algorithm>

namespace laggraph::oracle {

std::string canonical(const OracleVersion& v) {
    std::string s = std::to_string(v.major) + "." + std::to_string(v.minor) + "." + std::to_string(v.patch);
    for (std::size_t i = 0; i < v.pre.size(); ++i) s += (i == 0 ? "-" : ".") + v.pre[i];
    return s;
}

BruteForceCorpus::BruteForceCorpus(std::span<const RawRecord> records) {
    for (const auto& r : records) {
        auto v = read_version(r.version);
        if (!v) continue;
        releases_[r.package].push_back({r.version, *v, r.date});
    }
}

std::optional<OracleOutcome> BruteForceCorpus::evaluate(const std::string& target, const std::string& constraint,
                                                        Timestamp t) const {
    auto expansion = expand(constraint);
    if (!expansion) return std::nullopt;

    OracleOutcome out;
    auto it = releases_.find(target);
    if (it == releases_.end()) return out;

    std::vector<const OracleRelease*> available;
    for (const auto& r : it->second) {
        if (r.date <= t) available.push_back(&r);
    }

    const OracleRelease* best = nullptr;
    for (const auto* r : available) {
        if (contains(*expansion, r->version) && (!best || order(r->version, best->version) > 0)) best = r;
    }

    std::vector<const OracleRelease*> missed;
    for (const auto* r : available) {
        if (!best || order(r->version, best->version) > 0) missed.push_back(r);
    }
    std::sort(missed.begin(), missed.end(),
              [](const OracleRelease* a, const OracleRelease* b) { return order(a->version, b->version) < 0; });

    if (best) out.max_installable = canonical(best->version);
    for (const auto* r : missed) out.missed.push_back(canonical(r->version));
    if (!missed.empty()) {
        Timestamp earliest = missed.front()->date;
        for (const auto* r : missed) earliest = std::min(earliest, r->date);
        out.lag = t - earliest;
    }
    return out;
}

}  // namespace laggraph::oracle
