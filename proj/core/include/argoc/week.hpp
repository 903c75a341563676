#pragma once

#include <compare>
#include <string>

namespace argoc {

/// ISO-8601 week label. Ordering follows the calendar.
struct WeekStamp {
    int year = 0;
    int week = 0;  // 1..52 or 1..53 depending on the year

    auto operator<=>(const WeekStamp&) const = default;
};

/// 52 or 53.
int weeks_in_iso_year(int year);

bool valid_week(WeekStamp w);

/// Advances exactly one ISO week, rolling the year when needed.
WeekStamp next_week(WeekStamp w);
WeekStamp prev_week(WeekStamp w);
WeekStamp advance_weeks(WeekStamp w, long n);

/// a - b in whole weeks.
long week_diff(WeekStamp a, WeekStamp b);

/// Strictly increasing serial number; consecutive weeks differ by 1.
long week_index(WeekStamp w);

/// ISO week containing the civil date y-m-d.
WeekStamp week_of_date(int year, unsigned month, unsigned day);

/// Accepts "YYYY-Www" or "YYYY-MM-DD"; calendar dates map to the ISO week
/// containing them (CDC files date each week by its ending Saturday).
/// Throws std::invalid_argument on malformed input.
WeekStamp parse_week(const std::string& text);

/// "YYYY-Www" with a zero-padded week number.
std::string format_week(WeekStamp w);

}  // namespace argoc
