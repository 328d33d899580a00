#include "laggraph/semver.hpp"

#include <algorithm>
#include <optional>

namespace laggraph::semver {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_char(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Numeric identifier without leading zeros.
std::optional<std::uint64_t> parse_number(std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), is_digit)) return std::nullopt;
    if (s.size() > 1 && s.front() == '0') return std::nullopt;
    if (s.size() > 19) return std::nullopt;
    std::uint64_t n = 0;
    for (char c : s) n = n * 10 + static_cast<std::uint64_t>(c - '0');
    return n;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Parses "pre.release" identifiers. Returns false on malformed input.
bool parse_prerelease(std::string_view s, std::vector<PrereleaseId>& out) {
    for (std::string_view part : split(s, '.')) {
        if (part.empty() || !std::all_of(part.begin(), part.end(), is_ident_char)) return false;
        PrereleaseId id;
        if (std::all_of(part.begin(), part.end(), is_digit)) {
            auto n = parse_number(part);
            if (!n) return false;
            id.numeric = true;
            id.number = *n;
        } else {
            id.text = std::string(part);
        }
        out.push_back(std::move(id));
    }
    return true;
}

bool valid_build(std::string_view s) {
    for (std::string_view part : split(s, '.')) {
        if (part.empty() || !std::all_of(part.begin(), part.end(), is_ident_char)) return false;
    }
    return true;
}

// A possibly partial version: missing or wildcard components are nullopt.
struct Partial {
    std::optional<std::uint64_t> major;
    std::optional<std::uint64_t> minor;
    std::optional<std::uint64_t> patch;
    std::vector<PrereleaseId> prerelease;

    bool complete() const { return major && minor && patch; }
};

bool is_wildcard(std::string_view s) { return s == "x" || s == "X" || s == "*"; }

std::optional<Partial> parse_partial(std::string_view s) {
    while (!s.empty() && (s.front() == 'v' || s.front() == 'V' || s.front() == '=')) s.remove_prefix(1);
    if (s.empty()) return std::nullopt;

    std::string_view build;
    if (auto plus = s.find('+'); plus != std::string_view::npos) {
        build = s.substr(plus + 1);
        s = s.substr(0, plus);
        if (!valid_build(build)) return std::nullopt;
    }
    std::string_view pre;
    bool has_pre = false;
    // The pre-release starts at the first '-' after the third component.
    {
        std::size_t dots = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '.') ++dots;
            if (s[i] == '-' && dots == 2) {
                pre = s.substr(i + 1);
                s = s.substr(0, i);
                has_pre = true;
                break;
            }
        }
    }

    auto parts = split(s, '.');
    if (parts.size() > 3) return std::nullopt;
    Partial p;
    std::optional<std::uint64_t>* slots[3] = {&p.major, &p.minor, &p.patch};
    bool wild = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (is_wildcard(parts[i])) {
            wild = true;
            continue;
        }
        auto n = parse_number(parts[i]);
        if (!n) return std::nullopt;
        // Anything after a wildcard is treated as a wildcard too.
        if (!wild) *slots[i] = *n;
    }
    if (has_pre) {
        if (!p.complete() || !parse_prerelease(pre, p.prerelease)) return std::nullopt;
    }
    if (!build.empty() && !p.complete()) return std::nullopt;
    return p;
}

Version make(std::uint64_t major, std::uint64_t minor, std::uint64_t patch) {
    Version v;
    v.major = major;
    v.minor = minor;
    v.patch = patch;
    return v;
}

Version full(const Partial& p) {
    Version v = make(*p.major, *p.minor, *p.patch);
    v.prerelease = p.prerelease;
    return v;
}

Comparator cmp(Op op, Version v) { return Comparator{op, std::move(v), false}; }

// "<M.m.p-0": excludes the triple and all of its pre-releases.
Comparator below(std::uint64_t major, std::uint64_t minor, std::uint64_t patch) {
    Version v = make(major, minor, patch);
    v.prerelease.push_back(PrereleaseId{true, 0, {}});
    return Comparator{Op::Lt, std::move(v), true};
}

ComparatorSet nothing() { return {below(0, 0, 0)}; }

ComparatorSet desugar_x_range(const Partial& p) {
    if (!p.major) return {};
    if (!p.minor) return {cmp(Op::Ge, make(*p.major, 0, 0)), below(*p.major + 1, 0, 0)};
    if (!p.patch) return {cmp(Op::Ge, make(*p.major, *p.minor, 0)), below(*p.major, *p.minor + 1, 0)};
    return {cmp(Op::Eq, full(p))};
}

ComparatorSet desugar_tilde(const Partial& p) {
    if (!p.complete()) return desugar_x_range(p);
    return {cmp(Op::Ge, full(p)), below(*p.major, *p.minor + 1, 0)};
}

ComparatorSet desugar_caret(const Partial& p) {
    if (!p.major) return {};
    std::uint64_t M = *p.major;
    if (!p.minor) return {cmp(Op::Ge, make(M, 0, 0)), below(M + 1, 0, 0)};
    std::uint64_t m = *p.minor;
    if (!p.patch) {
        if (M > 0) return {cmp(Op::Ge, make(M, m, 0)), below(M + 1, 0, 0)};
        return {cmp(Op::Ge, make(0, m, 0)), below(0, m + 1, 0)};
    }
    if (M > 0) return {cmp(Op::Ge, full(p)), below(M + 1, 0, 0)};
    if (m > 0) return {cmp(Op::Ge, full(p)), below(0, m + 1, 0)};
    return {cmp(Op::Ge, full(p)), below(0, 0, *p.patch + 1)};
}

ComparatorSet desugar_primitive(Op op, const Partial& p) {
    if (p.complete()) return {cmp(op, full(p))};
    if (op == Op::Eq) return desugar_x_range(p);
    if (!p.major) {
        if (op == Op::Lt || op == Op::Gt) return nothing();
        return {};
    }
    std::uint64_t M = *p.major;
    bool minor_wild = !p.minor;
    std::uint64_t m = p.minor.value_or(0);
    switch (op) {
        case Op::Gt:
            return {minor_wild ? cmp(Op::Ge, make(M + 1, 0, 0)) : cmp(Op::Ge, make(M, m + 1, 0))};
        case Op::Ge:
            return {cmp(Op::Ge, make(M, m, 0))};
        case Op::Lt:
            return {below(M, m, 0)};
        case Op::Le:
            return {minor_wild ? below(M + 1, 0, 0) : below(M, m + 1, 0)};
        case Op::Eq:
            break;
    }
    return {};
}

ComparatorSet parse_hyphen(std::string_view from_text, std::string_view to_text, std::string_view raw) {
    auto from = parse_partial(from_text);
    auto to = parse_partial(to_text);
    if (!from || !to) throw ParseError("malformed hyphen range", std::string(raw));
    ComparatorSet set;
    if (from->major) {
        if (from->complete()) {
            set.push_back(cmp(Op::Ge, full(*from)));
        } else {
            set.push_back(cmp(Op::Ge, make(*from->major, from->minor.value_or(0), 0)));
        }
    }
    if (to->major) {
        if (to->complete()) {
            set.push_back(cmp(Op::Le, full(*to)));
        } else if (to->minor) {
            set.push_back(below(*to->major, *to->minor + 1, 0));
        } else {
            set.push_back(below(*to->major + 1, 0, 0));
        }
    }
    return set;
}

struct OpPrefix {
    std::string_view text;
    enum Kind { Primitive, Tilde, Caret } kind;
    Op op;
};

// Longest prefixes first.
constexpr OpPrefix kPrefixes[] = {
    {">=", OpPrefix::Primitive, Op::Ge}, {"<=", OpPrefix::Primitive, Op::Le},
    {"~>", OpPrefix::Tilde, Op::Eq},     {">", OpPrefix::Primitive, Op::Gt},
    {"<", OpPrefix::Primitive, Op::Lt},  {"=", OpPrefix::Primitive, Op::Eq},
    {"~", OpPrefix::Tilde, Op::Eq},      {"^", OpPrefix::Caret, Op::Eq},
};

bool is_bare_operator(std::string_view token) {
    return std::any_of(std::begin(kPrefixes), std::end(kPrefixes),
                       [&](const OpPrefix& p) { return p.text == token; });
}

ComparatorSet parse_simple(std::string_view token, std::string_view raw) {
    const OpPrefix* prefix = nullptr;
    for (const auto& p : kPrefixes) {
        if (token.substr(0, p.text.size()) == p.text) {
            prefix = &p;
            break;
        }
    }
    std::string_view rest = prefix ? token.substr(prefix->text.size()) : token;
    auto partial = parse_partial(rest);
    if (!partial) throw ParseError("malformed constraint", std::string(raw));
    if (!prefix) return desugar_x_range(*partial);
    switch (prefix->kind) {
        case OpPrefix::Tilde: return desugar_tilde(*partial);
        case OpPrefix::Caret: return desugar_caret(*partial);
        case OpPrefix::Primitive: return desugar_primitive(prefix->op, *partial);
    }
    return {};
}

std::vector<std::string_view> tokenize(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) tokens.push_back(s.substr(start, i - start));
    }
    return tokens;
}

ComparatorSet parse_range(std::string_view range, std::string_view raw) {
    auto tokens = tokenize(range);
    if (tokens.size() == 3 && tokens[1] == "-") return parse_hyphen(tokens[0], tokens[2], raw);

    ComparatorSet set;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string token(tokens[i]);
        // "> 1.2.3" is read as ">1.2.3".
        if (is_bare_operator(tokens[i])) {
            if (i + 1 >= tokens.size()) throw ParseError("dangling operator", std::string(raw));
            token += tokens[++i];
        }
        auto part = parse_simple(token, raw);
        set.insert(set.end(), part.begin(), part.end());
    }
    return set;
}

int compare_ids(const PrereleaseId& a, const PrereleaseId& b) {
    if (a.numeric && b.numeric) return a.number < b.number ? -1 : (a.number > b.number ? 1 : 0);
    if (a.numeric) return -1;
    if (b.numeric) return 1;
    int c = a.text.compare(b.text);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string op_text(Op op) {
    switch (op) {
        case Op::Eq: return "=";
        case Op::Lt: return "<";
        case Op::Le: return "<=";
        case Op::Gt: return ">";
        case Op::Ge: return ">=";
    }
    return "?";
}

}  // namespace

std::string Version::to_string() const {
    std::string s = std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
    for (std::size_t i = 0; i < prerelease.size(); ++i) {
        s += i == 0 ? '-' : '.';
        s += prerelease[i].numeric ? std::to_string(prerelease[i].number) : prerelease[i].text;
    }
    if (!build.empty()) s += "+" + build;
    return s;
}

std::strong_ordering compare(const Version& a, const Version& b) {
    if (auto c = a.major <=> b.major; c != 0) return c;
    if (auto c = a.minor <=> b.minor; c != 0) return c;
    if (auto c = a.patch <=> b.patch; c != 0) return c;
    // A release ranks above any of its pre-releases.
    if (a.prerelease.empty() && b.prerelease.empty()) return std::strong_ordering::equal;
    if (a.prerelease.empty()) return std::strong_ordering::greater;
    if (b.prerelease.empty()) return std::strong_ordering::less;
    std::size_t n = std::min(a.prerelease.size(), b.prerelease.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_ids(a.prerelease[i], b.prerelease[i]);
        if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.prerelease.size() <=> b.prerelease.size();
}

bool Comparator::test(const Version& v) const {
    auto c = compare(v, version);
    switch (op) {
        case Op::Eq: return c == 0;
        case Op::Lt: return c < 0;
        case Op::Le: return c <= 0;
        case Op::Gt: return c > 0;
        case Op::Ge: return c >= 0;
    }
    return false;
}

std::string Comparator::to_string() const { return op_text(op) + version.to_string(); }

bool Constraint::matches_any() const {
    return std::any_of(alternatives.begin(), alternatives.end(),
                       [](const ComparatorSet& s) { return s.empty(); });
}

std::string Constraint::to_string() const {
    if (matches_any()) return "*";
    std::string out;
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (i > 0) out += " || ";
        for (std::size_t j = 0; j < alternatives[i].size(); ++j) {
            if (j > 0) out += ' ';
            out += alternatives[i][j].to_string();
        }
    }
    return out;
}

std::string_view to_string(ReleaseType type) {
    switch (type) {
        case ReleaseType::Major: return "MAJOR";
        case ReleaseType::Minor: return "MINOR";
        case ReleaseType::Patch: return "PATCH";
        case ReleaseType::Initial: return "INITIAL";
    }
    return "?";
}

Version parse_version(std::string_view text) {
    std::string_view s = trim(text);
    if (!s.empty() && (s.front() == 'v' || s.front() == 'V')) s.remove_prefix(1);

    std::string_view build;
    if (auto plus = s.find('+'); plus != std::string_view::npos) {
        build = s.substr(plus + 1);
        s = s.substr(0, plus);
        if (!valid_build(build)) throw ParseError("malformed build metadata", std::string(text));
    }
    std::string_view pre;
    bool has_pre = false;
    if (auto dash = s.find('-'); dash != std::string_view::npos) {
        pre = s.substr(dash + 1);
        s = s.substr(0, dash);
        has_pre = true;
    }
    auto parts = split(s, '.');
    if (parts.size() != 3) throw ParseError("version needs major.minor.patch", std::string(text));
    Version v;
    std::uint64_t* slots[3] = {&v.major, &v.minor, &v.patch};
    for (std::size_t i = 0; i < 3; ++i) {
        auto n = parse_number(parts[i]);
        if (!n) throw ParseError("non-numeric version component", std::string(text));
        *slots[i] = *n;
    }
    if (has_pre && !parse_prerelease(pre, v.prerelease)) {
        throw ParseError("malformed pre-release", std::string(text));
    }
    v.build = std::string(build);
    v.raw = std::string(text);
    return v;
}

Constraint parse_constraint(std::string_view text) {
    Constraint c;
    c.raw = std::string(text);
    std::string_view s = trim(text);
    if (s.empty() || s == "latest") {
        c.alternatives.emplace_back();
        return c;
    }
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find("||", start);
        std::string_view part = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        c.alternatives.push_back(parse_range(part, text));
        if (pos == std::string_view::npos) break;
        start = pos + 2;
    }
    return c;
}

bool satisfies(const Version& v, const Constraint& c) {
    for (const auto& set : c.alternatives) {
        if (!std::all_of(set.begin(), set.end(), [&](const Comparator& cmp) { return cmp.test(v); })) {
            continue;
        }
        if (!v.is_prerelease()) return true;
        bool named = std::any_of(set.begin(), set.end(), [&](const Comparator& cmp) {
            return !cmp.synthetic && cmp.version.is_prerelease() && cmp.version.same_triple(v);
        });
        if (named) return true;
    }
    return false;
}

ReleaseType classify(const Version& curr, const Version& prev) {
    if (curr == prev) {
        throw std::invalid_argument("cannot classify a version against itself: " + curr.to_string());
    }
    if (curr.major != prev.major) return ReleaseType::Major;
    if (curr.minor != prev.minor) return ReleaseType::Minor;
    return ReleaseType::Patch;
}

}  // namespace laggraph::semver
