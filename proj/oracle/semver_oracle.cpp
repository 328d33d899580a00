#include "semver_oracle.hpp"

#include <sstream>

namespace laggraph::oracle {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

std::optional<std::uint64_t> number(const std::string& s) {
    if (!all_digits(s) || (s.size() > 1 && s[0] == '0') || s.size() > 18) return std::nullopt;
    return std::stoull(s);
}

int three_way(std::uint64_t a, std::uint64_t b) { return a < b ? -1 : (a > b ? 1 : 0); }

int order_ids(const std::string& a, const std::string& b) {
    bool an = all_digits(a);
    bool bn = all_digits(b);
    if (an && bn) {
        // Compare as numbers without overflow: longer digit strings are larger.
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        return a < b ? -1 : (a > b ? 1 : 0);
    }
    if (an != bn) return an ? -1 : 1;
    return a < b ? -1 : (a > b ? 1 : 0);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

OracleVersion triple(std::uint64_t M, std::uint64_t m, std::uint64_t p) {
    OracleVersion v;
    v.major = M;
    v.minor = m;
    v.patch = p;
    return v;
}

OracleVersion floor_of(std::uint64_t M, std::uint64_t m, std::uint64_t p) {
    OracleVersion v = triple(M, m, p);
    v.floor = true;
    return v;
}

Interval everything() { return Interval{}; }

Interval from_to(OracleVersion low, bool low_inc, std::optional<OracleVersion> high, bool high_inc) {
    Interval i;
    i.low = std::move(low);
    i.low_inclusive = low_inc;
    i.high = std::move(high);
    i.high_inclusive = high_inc;
    return i;
}

// Tighter of two lower / upper bounds.
void tighten(Interval& acc, const Interval& next) {
    if (next.low) {
        int c = acc.low ? order(*next.low, *acc.low) : 1;
        if (c > 0 || (c == 0 && !next.low_inclusive)) {
            acc.low = next.low;
            acc.low_inclusive = next.low_inclusive;
        }
    }
    if (next.high) {
        int c = acc.high ? order(*next.high, *acc.high) : -1;
        if (c < 0 || (c == 0 && !next.high_inclusive)) {
            acc.high = next.high;
            acc.high_inclusive = next.high_inclusive;
        }
    }
    acc.named_prereleases.insert(acc.named_prereleases.end(), next.named_prereleases.begin(),
                                 next.named_prereleases.end());
}

// Expansion table for one comparator (documented npm semantics).
std::optional<Interval> primitive(const std::string& token) {
    if (token == "*" || token == "x" || token == "X") return everything();

    std::string op;
    std::size_t at = 0;
    for (const char* candidate : {">=", "<=", ">", "<", "=", "~", "^"}) {
        std::string c(candidate);
        if (token.compare(0, c.size(), c) == 0) {
            op = c;
            at = c.size();
            break;
        }
    }
    std::string body = token.substr(at);

    // Bare x-ranges.
    if (op.empty() || op == "=") {
        auto parts = split_on(body, '.');
        if (parts.size() == 2 && (parts[1] == "x" || parts[1] == "*")) {
            auto M = number(parts[0]);
            if (!M) return std::nullopt;
            return from_to(triple(*M, 0, 0), true, floor_of(*M + 1, 0, 0), false);
        }
        if (parts.size() == 3 && (parts[2] == "x" || parts[2] == "*")) {
            auto M = number(parts[0]);
            auto m = number(parts[1]);
            if (!M || !m) return std::nullopt;
            return from_to(triple(*M, *m, 0), true, floor_of(*M, *m + 1, 0), false);
        }
    }

    auto v = read_version(body);
    if (!v) return std::nullopt;
    Interval out;
    if (op.empty() || op == "=") {
        out = from_to(*v, true, *v, true);
    } else if (op == ">=") {
        out = from_to(*v, true, std::nullopt, true);
    } else if (op == ">") {
        out = from_to(*v, false, std::nullopt, true);
    } else if (op == "<=") {
        out.high = *v;
        out.high_inclusive = true;
    } else if (op == "<") {
        out.high = *v;
        out.high_inclusive = false;
    } else if (op == "~") {
        out = from_to(*v, true, floor_of(v->major, v->minor + 1, 0), false);
    } else {  // "^": bump the first non-zero component
        if (v->major != 0) {
            out = from_to(*v, true, floor_of(v->major + 1, 0, 0), false);
        } else if (v->minor != 0) {
            out = from_to(*v, true, floor_of(0, v->minor + 1, 0), false);
        } else {
            out = from_to(*v, true, floor_of(0, 0, v->patch + 1), false);
        }
    }
    if (!v->pre.empty()) out.named_prereleases.push_back(*v);
    return out;
}

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

int order(const OracleVersion& a, const OracleVersion& b) {
    if (int c = three_way(a.major, b.major)) return c;
    if (int c = three_way(a.minor, b.minor)) return c;
    if (int c = three_way(a.patch, b.patch)) return c;
    // floor < any pre-release < release
    auto rank = [](const OracleVersion& v) { return v.floor ? 0 : (v.pre.empty() ? 2 : 1); };
    if (int c = three_way(rank(a), rank(b))) return c;
    if (rank(a) != 1) return 0;
    for (std::size_t i = 0; i < a.pre.size() && i < b.pre.size(); ++i) {
        if (int c = order_ids(a.pre[i], b.pre[i])) return c;
    }
    return three_way(a.pre.size(), b.pre.size());
}

std::optional<OracleVersion> read_version(std::string_view text) {
    std::string s = trimmed(std::string(text));
    if (!s.empty() && s[0] == 'v') s.erase(0, 1);
    if (auto plus = s.find('+'); plus != std::string::npos) s.erase(plus);
    OracleVersion v;
    if (auto dash = s.find('-'); dash != std::string::npos) {
        v.pre = split_on(s.substr(dash + 1), '.');
        for (const auto& id : v.pre) {
            if (id.empty()) return std::nullopt;
        }
        s.erase(dash);
    }
    auto parts = split_on(s, '.');
    if (parts.size() != 3) return std::nullopt;
    auto M = number(parts[0]);
    auto m = number(parts[1]);
    auto p = number(parts[2]);
    if (!M || !m || !p) return std::nullopt;
    v.major = *M;
    v.minor = *m;
    v.patch = *p;
    return v;
}

std::optional<Expansion> expand(std::string_view constraint) {
    std::string text = trimmed(std::string(constraint));
    Expansion e;
    if (text.empty()) {
        e.alternatives.push_back(everything());
        return e;
    }
    std::size_t start = 0;
    while (true) {
        std::size_t bar = text.find("||", start);
        std::string part = trimmed(text.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
        Interval acc = everything();
        std::istringstream tokens(part);
        std::string token;
        while (tokens >> token) {
            auto next = primitive(token);
            if (!next) return std::nullopt;
            tighten(acc, *next);
        }
        e.alternatives.push_back(std::move(acc));
        if (bar == std::string::npos) break;
        start = bar + 2;
    }
    return e;
}

bool contains(const Expansion& e, const OracleVersion& v) {
    for (const auto& i : e.alternatives) {
        if (i.low) {
            int c = order(v, *i.low);
            if (c < 0 || (c == 0 && !i.low_inclusive)) continue;
        }
        if (i.high) {
            int c = order(v, *i.high);
            if (c > 0 || (c == 0 && !i.high_inclusive)) continue;
        }
        if (!v.pre.empty()) {
            bool named = false;
            for (const auto& n : i.named_prereleases) {
                named = named || (n.major == v.major && n.minor == v.minor && n.patch == v.patch);
            }
            if (!named) continue;
        }
        return true;
    }
    return false;
}

}  // namespace laggraph::oracle
