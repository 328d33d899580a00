#include "laggraph/time.hpp"

#include <cstdio>
#include <stdexcept>

namespace laggraph {

namespace {

int read_fixed(std::string_view text, std::size_t pos, std::size_t width) {
    if (pos + width > text.size()) {
        throw std::invalid_argument("truncated timestamp: " + std::string(text));
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') {
            throw std::invalid_argument("bad digit in timestamp: " + std::string(text));
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw std::invalid_argument("malformed timestamp: " + std::string(text));
    }
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }

    int y = read_fixed(text, 0, 4);
    expect(text, 4, '-');
    int mo = read_fixed(text, 5, 2);
    expect(text, 7, '-');
    int d = read_fixed(text, 8, 2);
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date: " + std::string(text));
    }
    Timestamp result = sys_days{ymd};
    if (text.size() == 10) return result;

    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') {
        throw std::invalid_argument("malformed timestamp: " + std::string(text));
    }
    int hh = read_fixed(text, 11, 2);
    expect(text, 13, ':');
    int mm = read_fixed(text, 14, 2);
    expect(text, 16, ':');
    int ss = read_fixed(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) {
        throw std::invalid_argument("time of day out of range: " + std::string(text));
    }
    result += hours{hh} + minutes{mm} + seconds{ss};

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) {
            throw std::invalid_argument("empty fraction in timestamp: " + std::string(text));
        }
    }
    if (pos >= text.size()) {
        throw std::invalid_argument("timestamp lacks a UTC offset: " + std::string(text));
    }
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        int sign = text[pos] == '+' ? 1 : -1;
        int oh = read_fixed(text, pos + 1, 2);
        expect(text, pos + 3, ':');
        int om = read_fixed(text, pos + 4, 2);
        result -= sign * (hours{oh} + minutes{om});
        pos += 6;
    } else {
        throw std::invalid_argument("malformed UTC offset: " + std::string(text));
    }
    if (pos != text.size()) {
        throw std::invalid_argument("trailing characters in timestamp: " + std::string(text));
    }
    return result;
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto day_start = floor<std::chrono::days>(t);
    year_month_day ymd{day_start};
    hh_mm_ss hms{t - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::string month_key(Timestamp t) {
    using namespace std::chrono;
    year_month_day ymd{floor<std::chrono::days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()));
    return buf;
}

std::string year_key(Timestamp t) {
    using namespace std::chrono;
    year_month_day ymd{floor<std::chrono::days>(t)};
    return std::to_string(static_cast<int>(ymd.year()));
}

}  // namespace laggraph
