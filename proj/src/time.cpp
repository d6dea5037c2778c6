#include "taudit/time.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "taudit/error.hpp"

namespace taudit {
namespace {

int digits(std::string_view s, std::size_t pos, std::size_t n, std::string_view whole) {
    if (pos + n > s.size()) {
        throw DataError("truncated timestamp: '" + std::string(whole) + "'");
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw DataError("bad digit in timestamp: '" + std::string(whole) + "'");
        }
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

void expect(std::string_view s, std::size_t pos, std::string_view chars, std::string_view whole) {
    if (pos >= s.size() || chars.find(s[pos]) == std::string_view::npos) {
        throw DataError("malformed timestamp: '" + std::string(whole) + "'");
    }
}

}  // namespace

int parse_utc_offset(std::string_view text) {
    if (text == "Z" || text == "z") {
        return 0;
    }
    if (text.size() != 6 && text.size() != 5) {
        throw DataError("malformed UTC offset: '" + std::string(text) + "'");
    }
    expect(text, 0, "+-", text);
    const int sign = text[0] == '-' ? -1 : 1;
    const int hh = digits(text, 1, 2, text);
    std::size_t mpos = 3;
    if (text.size() == 6) {
        expect(text, 3, ":", text);
        mpos = 4;
    }
    const int mm = digits(text, mpos, 2, text);
    if (hh > 23 || mm > 59) {
        throw DataError("UTC offset out of range: '" + std::string(text) + "'");
    }
    return sign * (hh * 60 + mm);
}

std::string format_utc_offset(int offset_minutes) {
    const char sign = offset_minutes < 0 ? '-' : '+';
    const int a = std::abs(offset_minutes);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", sign, a / 60, a % 60);
    return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
    using namespace std::chrono;
    const int y = digits(text, 0, 4, text);
    expect(text, 4, "-", text);
    const int mo = digits(text, 5, 2, text);
    expect(text, 7, "-", text);
    const int d = digits(text, 8, 2, text);
    expect(text, 10, "Tt ", text);
    const int hh = digits(text, 11, 2, text);
    expect(text, 13, ":", text);
    const int mi = digits(text, 14, 2, text);
    expect(text, 16, ":", text);
    const int ss = digits(text, 17, 2, text);
    std::size_t pos = 19;

    long long millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int scale = 100;
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (scale > 0) {
                millis += (text[pos] - '0') * scale;
                scale /= 10;
            }
            ++pos;
        }
        if (pos == start) {
            throw DataError("empty fractional seconds: '" + std::string(text) + "'");
        }
    }
    if (pos >= text.size()) {
        throw DataError("timestamp lacks UTC offset: '" + std::string(text) + "'");
    }
    const int offset = parse_utc_offset(text.substr(pos));

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mi > 59 || ss > 60) {
        throw DataError("invalid calendar value in timestamp: '" + std::string(text) + "'");
    }
    const auto local = sys_days{ymd} + hours{hh} + minutes{mi} + seconds{ss} + milliseconds{millis};
    return Timestamp{time_point_cast<Duration>(local - minutes{offset}), offset};
}

std::string format_rfc3339(Instant t, int offset_minutes) {
    using namespace std::chrono;
    const auto local = t + minutes{offset_minutes};
    const auto day_start = floor<days>(local);
    const year_month_day ymd{day_start};
    const hh_mm_ss<Duration> tod{local - day_start};
    char buf[48];
    int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                          static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                          static_cast<int>(tod.seconds().count()));
    const auto ms = tod.subseconds().count();
    if (ms != 0) {
        n += std::snprintf(buf + n, sizeof buf - n, ".%03d", static_cast<int>(ms));
    }
    std::string out(buf, static_cast<std::size_t>(n));
    out += offset_minutes == 0 ? std::string("Z") : format_utc_offset(offset_minutes);
    return out;
}

Duration from_seconds(double seconds) {
    return Duration{static_cast<Duration::rep>(std::llround(seconds * 1000.0))};
}

}  // namespace taudit
