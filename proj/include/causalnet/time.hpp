#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace causalnet {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar
// (Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
    static const int base[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y))
        return 29;
    return base[m - 1];
}

// A point in time at second resolution, always UTC.
struct utc_time {
    std::int64_t seconds = 0;  // since 1970-01-01T00:00:00Z

    friend auto operator<=>(const utc_time&, const utc_time&) = default;

    void civil(int& y, int& m, int& d, int& hh, int& mm, int& ss) const {
        std::int64_t days = seconds / 86400;
        std::int64_t rem = seconds % 86400;
        if (rem < 0) {
            rem += 86400;
            --days;
        }
        civil_from_days(days, y, m, d);
        hh = static_cast<int>(rem / 3600);
        mm = static_cast<int>(rem % 3600 / 60);
        ss = static_cast<int>(rem % 60);
    }

    int year() const { int y, m, d, hh, mm, ss; civil(y, m, d, hh, mm, ss); return y; }
    int month() const { int y, m, d, hh, mm, ss; civil(y, m, d, hh, mm, ss); return m; }
    int hour() const { int y, m, d, hh, mm, ss; civil(y, m, d, hh, mm, ss); return hh; }

    // 0 = Sunday ... 6 = Saturday
    int weekday() const {
        std::int64_t days = seconds / 86400;
        if (seconds % 86400 < 0)
            --days;
        return static_cast<int>(((days % 7) + 11) % 7);  // 1970-01-01 was a Thursday
    }
};

inline utc_time make_utc(int y, int mo, int d, int hh = 0, int mm = 0, int ss = 0) {
    return utc_time{days_from_civil(y, mo, d) * 86400 + hh * 3600 + mm * 60 + ss};
}

// Parses ISO 8601 with an explicit offset ("Z" or +-HH:MM); fractional
// seconds are accepted and truncated. Returns nullopt on anything else.
inline std::optional<utc_time> parse_iso8601(std::string_view s) {
    auto digit = [&](std::size_t i) -> int {
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            return -1;
        return s[i] - '0';
    };
    auto num2 = [&](std::size_t i) -> int {
        int a = digit(i), b = digit(i + 1);
        return (a < 0 || b < 0) ? -1 : a * 10 + b;
    };
    if (s.size() < 20)
        return std::nullopt;
    int y = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        int v = digit(i);
        if (v < 0)
            return std::nullopt;
        y = y * 10 + v;
    }
    if (s[4] != '-' || s[7] != '-')
        return std::nullopt;
    const int mo = num2(5), d = num2(8);
    if (s[10] != 'T' && s[10] != 't' && s[10] != ' ')
        return std::nullopt;
    const int hh = num2(11), mi = num2(14), ss = num2(17);
    if (s[13] != ':' || s[16] != ':')
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || hh < 0 || mi < 0 || mi > 59 || ss < 0 || ss > 59 ||
        hh > 23 || d > days_in_month(y, mo))
        return std::nullopt;
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::size_t ndig = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            ++pos;
            ++ndig;
        }
        if (ndig == 0)
            return std::nullopt;
    }
    if (pos >= s.size())
        return std::nullopt;  // offset is mandatory
    std::int64_t offset = 0;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        const int sign = s[pos] == '+' ? 1 : -1;
        const int oh = num2(pos + 1);
        if (oh < 0 || oh > 23 || pos + 3 >= s.size() || s[pos + 3] != ':')
            return std::nullopt;
        const int om = num2(pos + 4);
        if (om < 0 || om > 59)
            return std::nullopt;
        offset = sign * (oh * 3600 + om * 60);
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != s.size())
        return std::nullopt;
    return utc_time{days_from_civil(y, mo, d) * 86400 + hh * 3600 + mi * 60 + ss - offset};
}

// Canonical form: "YYYY-MM-DDTHH:MM:SSZ"
inline std::string format_iso8601(utc_time t) {
    int y, mo, d, hh, mm, ss;
    t.civil(y, mo, d, hh, mm, ss);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d, hh, mm, ss);
    return buf;
}

}  // namespace causalnet
