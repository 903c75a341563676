#include <doctest.h>

#include <argoc/week.hpp>
#include <random>
#include <stdexcept>

using namespace argoc;

TEST_CASE("known ISO week facts") {
    CHECK(weeks_in_iso_year(2015) == 53);  // Jan 1 2015 was a Thursday
    CHECK(weeks_in_iso_year(2020) == 53);  // leap year starting Wednesday
    CHECK(weeks_in_iso_year(2014) == 52);
    CHECK(weeks_in_iso_year(2021) == 52);

    CHECK(week_of_date(2015, 1, 1) == WeekStamp{2015, 1});
    CHECK(week_of_date(2016, 1, 1) == WeekStamp{2015, 53});  // Friday, still W53 of 2015
    CHECK(week_of_date(2010, 1, 3) == WeekStamp{2009, 53});  // Sunday closes 2009-W53
    CHECK(week_of_date(2010, 1, 4) == WeekStamp{2010, 1});
    CHECK(week_of_date(2009, 12, 28) == WeekStamp{2009, 53});
    CHECK(week_of_date(2009, 3, 29) == WeekStamp{2009, 13});  // Sunday
    CHECK(week_of_date(2010, 5, 22) == WeekStamp{2010, 20});  // Saturday
}

TEST_CASE("successor advances exactly one week and preserves order") {
    WeekStamp w{2008, 50};
    for (int i = 0; i < 400; ++i) {
        const WeekStamp n = next_week(w);
        CHECK(valid_week(n));
        CHECK(w < n);
        CHECK(week_diff(n, w) == 1);
        CHECK(week_index(n) == week_index(w) + 1);
        CHECK(prev_week(n) == w);
        w = n;
    }
}

TEST_CASE("advance_weeks matches repeated succession") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> year(2000, 2022);
    std::uniform_int_distribution<int> step(-200, 200);
    for (int rep = 0; rep < 50; ++rep) {
        WeekStamp w{year(rng), 1};
        const int n = step(rng);
        WeekStamp manual = w;
        for (int i = 0; i < std::abs(n); ++i) manual = n > 0 ? next_week(manual) : prev_week(manual);
        CHECK(advance_weeks(w, n) == manual);
        CHECK(week_diff(manual, w) == n);
    }
}

TEST_CASE("parsing accepts both forms") {
    CHECK(parse_week("2014-W40") == WeekStamp{2014, 40});
    CHECK(parse_week("2014-W05") == WeekStamp{2014, 5});
    // CDC-style Saturday week endings land in the ISO week containing them.
    CHECK(parse_week("2009-04-04") == WeekStamp{2009, 14});
    CHECK(parse_week("2015-07-11") == WeekStamp{2015, 28});
    CHECK_THROWS_AS(parse_week("2014-W54"), std::invalid_argument);
    CHECK_THROWS_AS(parse_week("2014-13-01"), std::invalid_argument);
    CHECK_THROWS_AS(parse_week("garbage"), std::invalid_argument);
}

TEST_CASE("format round trip") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> year(1990, 2030);
    for (int rep = 0; rep < 100; ++rep) {
        WeekStamp w{year(rng), 0};
        std::uniform_int_distribution<int> week(1, weeks_in_iso_year(w.year));
        w.week = week(rng);
        CHECK(parse_week(format_week(w)) == w);
    }
    CHECK(format_week({2014, 5}) == "2014-W05");
}
