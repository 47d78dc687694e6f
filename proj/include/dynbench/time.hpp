#pragma once

// Local civil timestamps (no timezone handling) and the five time-of-day
// windows used for temporal slicing.

#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dynbench {

// Timestamps are local civil time throughout; windows are defined in local
// time, so no zone conversion is ever applied.
struct CivilDateTime {
    int year = 1970;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;

    friend auto operator<=>(const CivilDateTime&, const CivilDateTime&) = default;

    int minutes_of_day() const { return hour * 60 + minute; }

    // Serial seconds on a proleptic Gregorian calendar; only used for ordering
    // and for spacing synthetic timestamps.
    std::int64_t to_seconds() const {
        const int y = year - (month <= 2 ? 1 : 0);
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = static_cast<unsigned>((153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1);
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        const std::int64_t days = static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
        return days * 86400 + hour * 3600 + minute * 60 + second;
    }

    static CivilDateTime from_seconds(std::int64_t s) {
        std::int64_t days = s / 86400;
        std::int64_t rem = s % 86400;
        if (rem < 0) {
            rem += 86400;
            days -= 1;
        }
        const std::int64_t z = days + 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp + (mp < 10 ? 3 : -9);
        CivilDateTime out;
        out.year = static_cast<int>(y + (m <= 2 ? 1 : 0));
        out.month = static_cast<int>(m);
        out.day = static_cast<int>(d);
        out.hour = static_cast<int>(rem / 3600);
        out.minute = static_cast<int>((rem % 3600) / 60);
        out.second = static_cast<int>(rem % 60);
        return out;
    }

    // Accepts "YYYY-MM-DDTHH:MM[:SS]" (or a space separator). Anything else,
    // including timezone designators, is rejected.
    static std::optional<CivilDateTime> parse(std::string_view text) {
        const auto digits = [&](std::size_t at, int n, int& out) {
            if (at + static_cast<std::size_t>(n) > text.size()) return false;
            out = 0;
            for (int k = 0; k < n; ++k) {
                const char c = text[at + static_cast<std::size_t>(k)];
                if (c < '0' || c > '9') return false;
                out = out * 10 + (c - '0');
            }
            return true;
        };
        CivilDateTime t;
        if (text.size() < 16) return std::nullopt;
        if (!digits(0, 4, t.year) || text[4] != '-' || !digits(5, 2, t.month) || text[7] != '-' ||
            !digits(8, 2, t.day))
            return std::nullopt;
        if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
        if (!digits(11, 2, t.hour) || text[13] != ':' || !digits(14, 2, t.minute)) return std::nullopt;
        std::size_t used = 16;
        if (text.size() >= 19 && text[16] == ':') {
            if (!digits(17, 2, t.second)) return std::nullopt;
            used = 19;
        }
        if (used != text.size()) return std::nullopt;
        if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > 31 || t.hour > 23 || t.minute > 59 ||
            t.second > 59)
            return std::nullopt;
        return t;
    }

    std::string to_string() const {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", year, month, day, hour,
                      minute, second);
        return buf;
    }
};

// Five windows partitioning the 24-hour day; the last one wraps midnight.
enum class TimeWindow {
    early_morning,                 // [03:00, 06:00)
    morning_commute,               // [06:00, 09:00)
    late_morning_early_afternoon,  // [09:00, 15:30)
    late_afternoon,                // [15:30, 18:30)
    evening_overnight,             // [18:30, 03:00)
};

inline constexpr int kNumTimeWindows = 5;

inline constexpr std::array<TimeWindow, kNumTimeWindows> kAllTimeWindows = {
    TimeWindow::early_morning, TimeWindow::morning_commute,
    TimeWindow::late_morning_early_afternoon, TimeWindow::late_afternoon,
    TimeWindow::evening_overnight};

inline TimeWindow time_window(int minutes_of_day) {
    if (minutes_of_day < 0 || minutes_of_day >= 24 * 60)
        throw std::invalid_argument("time_window: minutes of day out of range");
    if (minutes_of_day < 3 * 60) return TimeWindow::evening_overnight;
    if (minutes_of_day < 6 * 60) return TimeWindow::early_morning;
    if (minutes_of_day < 9 * 60) return TimeWindow::morning_commute;
    if (minutes_of_day < 15 * 60 + 30) return TimeWindow::late_morning_early_afternoon;
    if (minutes_of_day < 18 * 60 + 30) return TimeWindow::late_afternoon;
    return TimeWindow::evening_overnight;
}

inline TimeWindow time_window(const CivilDateTime& t) { return time_window(t.minutes_of_day()); }

inline std::string_view window_name(TimeWindow w) {
    switch (w) {
        case TimeWindow::early_morning: return "Early Morning 3AM - 6AM";
        case TimeWindow::morning_commute: return "Morning Commute 6AM - 9AM";
        case TimeWindow::late_morning_early_afternoon:
            return "Late Morning & Early Afternoon 9AM - 3:30PM";
        case TimeWindow::late_afternoon: return "Late Afternoon 3:30PM - 6:30PM";
        case TimeWindow::evening_overnight: return "Evening & Overnight 6:30PM - 3AM";
    }
    return "";
}

inline std::optional<TimeWindow> window_from_name(std::string_view name) {
    for (TimeWindow w : kAllTimeWindows)
        if (window_name(w) == name) return w;
    return std::nullopt;
}

}  // namespace dynbench
