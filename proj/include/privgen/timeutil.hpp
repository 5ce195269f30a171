#pragma once

#include <cctype>
#include <cstdint>
#include <string>

#include "privgen/error.hpp"

namespace privgen {

struct CivilTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

// Civil <-> epoch-day conversions (proleptic Gregorian, UTC, no locale).
inline int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

/// Weekday with Monday = 0 .. Sunday = 6.
inline int weekday_from_days(int64_t z) {
    return static_cast<int>(((z + 3) % 7 + 7) % 7);
}

inline int64_t to_epoch_seconds(const CivilTime& t) {
    return days_from_civil(t.year, t.month, t.day) * 86400
           + t.hour * 3600 + t.minute * 60 + t.second;
}

inline CivilTime from_epoch_seconds(int64_t ts) {
    int64_t days = ts / 86400;
    int64_t rem = ts % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilTime out;
    civil_from_days(days, out.year, out.month, out.day);
    out.hour = static_cast<int>(rem / 3600);
    out.minute = static_cast<int>((rem % 3600) / 60);
    out.second = static_cast<int>(rem % 60);
    return out;
}

inline bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

namespace detail {
inline int iso_weeks_in_year(int y) {
    // 53-week years are those starting on Thursday, or on Wednesday when leap.
    int jan1 = weekday_from_days(days_from_civil(y, 1, 1));  // Mon=0
    return 52 + (jan1 == 3 || (is_leap(y) && jan1 == 2));
}
}  // namespace detail

/// ISO-8601 week number (1..53) for a civil date.
inline int iso_week_of_year(int y, int m, int d) {
    int64_t doy = days_from_civil(y, m, d) - days_from_civil(y, 1, 1) + 1;
    int wd = weekday_from_days(days_from_civil(y, m, d)) + 1;  // Mon=1..Sun=7
    int week = static_cast<int>((doy - wd + 10) / 7);
    if (week < 1) return detail::iso_weeks_in_year(y - 1);
    if (week > detail::iso_weeks_in_year(y)) return 1;
    return week;
}

// Timestamp format strings use a strftime-like subset: %Y %m %d %H %M %S plus
// literal characters. Parsing accepts 1-2 digits for the short fields (4 for
// %Y); formatting zero-pads to the conventional widths.
inline int64_t parse_timestamp(const std::string& text, const std::string& fmt) {
    CivilTime t;
    bool seen_any = false;
    size_t pos = 0;
    auto read_int = [&](int max_digits, const char* what) {
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw Error(std::string("expected ") + what + " in timestamp '" + text + "'");
        int v = 0;
        int n = 0;
        while (pos < text.size() && n < max_digits &&
               std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            ++pos;
            ++n;
        }
        return v;
    };
    for (size_t i = 0; i < fmt.size(); ++i) {
        if (fmt[i] == '%' && i + 1 < fmt.size()) {
            char c = fmt[++i];
            switch (c) {
                case 'Y': t.year = read_int(4, "year"); seen_any = true; break;
                case 'm': t.month = read_int(2, "month"); seen_any = true; break;
                case 'd': t.day = read_int(2, "day"); seen_any = true; break;
                case 'H': t.hour = read_int(2, "hour"); seen_any = true; break;
                case 'M': t.minute = read_int(2, "minute"); seen_any = true; break;
                case 'S': t.second = read_int(2, "second"); seen_any = true; break;
                case '%':
                    if (pos >= text.size() || text[pos] != '%')
                        throw Error("expected '%' in timestamp '" + text + "'");
                    ++pos;
                    break;
                default:
                    throw Error(std::string("unsupported timestamp format token %") + c);
            }
        } else {
            if (pos >= text.size() || text[pos] != fmt[i])
                throw Error("timestamp '" + text + "' does not match format '" + fmt + "'");
            ++pos;
        }
    }
    if (pos != text.size())
        throw Error("trailing characters in timestamp '" + text + "'");
    if (!seen_any) throw Error("timestamp format '" + fmt + "' has no fields");
    if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > 31 || t.hour > 23 ||
        t.minute > 59 || t.second > 60)
        throw Error("timestamp '" + text + "' is out of range");
    return to_epoch_seconds(t);
}

inline std::string format_timestamp(int64_t ts, const std::string& fmt) {
    CivilTime t = from_epoch_seconds(ts);
    std::string out;
    auto pad = [&](int v, int width) {
        std::string s = std::to_string(v);
        while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
        out += s;
    };
    for (size_t i = 0; i < fmt.size(); ++i) {
        if (fmt[i] == '%' && i + 1 < fmt.size()) {
            char c = fmt[++i];
            switch (c) {
                case 'Y': pad(t.year, 4); break;
                case 'm': pad(t.month, 2); break;
                case 'd': pad(t.day, 2); break;
                case 'H': pad(t.hour, 2); break;
                case 'M': pad(t.minute, 2); break;
                case 'S': pad(t.second, 2); break;
                case '%': out += '%'; break;
                default: throw Error(std::string("unsupported timestamp format token %") + c);
            }
        } else {
            out += fmt[i];
        }
    }
    return out;
}

}  // namespace privgen
