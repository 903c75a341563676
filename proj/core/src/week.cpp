#include "argoc/week.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace argoc {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
long days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<long>(era) * 146097 + static_cast<long>(doe) - 719468;
}

// ISO weekday 1=Monday .. 7=Sunday. 1970-01-01 was a Thursday.
int iso_weekday(long days) {
    long r = (days + 3) % 7;
    if (r < 0) r += 7;
    return static_cast<int>(r) + 1;
}

// Days number of the Monday opening ISO week w of year y.
long monday_of(int year, int week) {
    const long jan4 = days_from_civil(year, 1, 4);  // Jan 4 is always in W01
    const long monday_w1 = jan4 - (iso_weekday(jan4) - 1);
    return monday_w1 + 7L * (week - 1);
}

}  // namespace

int weeks_in_iso_year(int year) {
    // Long years are those whose Jan 1 is a Thursday, or a Wednesday in leap years.
    const int wd = iso_weekday(days_from_civil(year, 1, 1));
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return (wd == 4 || (leap && wd == 3)) ? 53 : 52;
}

bool valid_week(WeekStamp w) {
    return w.week >= 1 && w.week <= weeks_in_iso_year(w.year);
}

WeekStamp next_week(WeekStamp w) {
    if (w.week < weeks_in_iso_year(w.year)) return {w.year, w.week + 1};
    return {w.year + 1, 1};
}

WeekStamp prev_week(WeekStamp w) {
    if (w.week > 1) return {w.year, w.week - 1};
    return {w.year - 1, weeks_in_iso_year(w.year - 1)};
}

WeekStamp advance_weeks(WeekStamp w, long n) {
    const long days = monday_of(w.year, w.week) + 7 * n;
    // Monday's civil date identifies the week; recover it via the ordinal algorithm.
    // civil_from_days (Howard Hinnant's algorithm).
    long z = days + 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return week_of_date(static_cast<int>(y + (m <= 2)), m, d);
}

long week_diff(WeekStamp a, WeekStamp b) {
    return (monday_of(a.year, a.week) - monday_of(b.year, b.week)) / 7;
}

long week_index(WeekStamp w) {
    // Floor division; Mondays are exact multiples of 7 apart.
    const long d = monday_of(w.year, w.week);
    return (d >= 0 ? d : d - 6) / 7;
}

WeekStamp week_of_date(int year, unsigned month, unsigned day) {
    const long days = days_from_civil(year, month, day);
    const int wd = iso_weekday(days);
    const long ordinal = days - days_from_civil(year, 1, 1) + 1;  // 1..366
    int week = static_cast<int>((ordinal - wd + 10) / 7);
    if (week < 1) return {year - 1, weeks_in_iso_year(year - 1)};
    if (week > weeks_in_iso_year(year)) return {year + 1, 1};
    return {year, week};
}

WeekStamp parse_week(const std::string& text) {
    int y = 0, w = 0;
    unsigned m = 0, d = 0;
    char sep = 0;
    if (std::sscanf(text.c_str(), "%d-%c%d", &y, &sep, &w) == 3 && (sep == 'W' || sep == 'w')) {
        WeekStamp ws{y, w};
        if (!valid_week(ws)) throw std::invalid_argument("invalid ISO week: " + text);
        return ws;
    }
    if (std::sscanf(text.c_str(), "%d-%u-%u", &y, &m, &d) == 3) {
        if (m < 1 || m > 12 || d < 1 || d > 31)
            throw std::invalid_argument("invalid calendar date: " + text);
        return week_of_date(y, m, d);
    }
    throw std::invalid_argument("unparseable date: '" + text + "' (expected YYYY-Www or YYYY-MM-DD)");
}

std::string format_week(WeekStamp w) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-W%02d", w.year, w.week);
    return buf;
}

}  // namespace argoc
