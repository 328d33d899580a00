#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace laggraph {

/// UTC instant at second resolution.
using Timestamp = std::chrono::sys_seconds;
/// Signed span of time in seconds. Lags are never negative; lag changes can be.
using Duration = std::chrono::seconds;

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Parses an RFC 3339 timestamp ("2017-01-02T03:04:05Z", optional fractional
/// seconds, "Z" or a numeric offset). A bare "YYYY-MM-DD" is read as midnight UTC.
/// Throws std::invalid_argument on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);

/// Calendar month key "YYYY-MM" (UTC).
std::string month_key(Timestamp t);
/// Calendar year key "YYYY" (UTC).
std::string year_key(Timestamp t);

inline double to_days(Duration d) {
    return static_cast<double>(d.count()) / static_cast<double>(kSecondsPerDay);
}

inline Duration days(std::int64_t n) { return Duration{n * kSecondsPerDay}; }

}  // namespace laggraph
