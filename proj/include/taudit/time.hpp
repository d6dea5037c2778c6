#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace taudit {

using Duration = std::chrono::milliseconds;
using Instant = std::chrono::sys_time<Duration>;

inline constexpr Duration kDay = std::chrono::hours(24);

/// An instant together with the UTC offset it was written in.
struct Timestamp {
    Instant utc{};
    int offset_minutes = 0;
};

/// Parses RFC 3339 (`2025-08-05T06:00:00+02:00`, `...Z`, optional fractional
/// seconds, which are kept to millisecond precision). Throws DataError.
Timestamp parse_rfc3339(std::string_view text);

/// Formats with the given offset; fractional seconds only when non-zero.
std::string format_rfc3339(Instant t, int offset_minutes = 0);

/// Parses "+02:00", "-0530", "Z" into signed minutes. Throws DataError.
int parse_utc_offset(std::string_view text);
std::string format_utc_offset(int offset_minutes);

/// Days as a floating count, for regression time columns and frequencies.
inline double to_days(Duration d) {
    return std::chrono::duration<double, std::ratio<86400>>(d).count();
}

/// Rounds a floating number of seconds to the millisecond grid.
Duration from_seconds(double seconds);

}  // namespace taudit
