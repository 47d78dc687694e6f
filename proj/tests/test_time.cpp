#include <catch_amalgamated.hpp>

#include "dynbench/time.hpp"

using namespace dynbench;

TEST_CASE("time window boundaries") {
    CHECK(time_window(3 * 60) == TimeWindow::early_morning);
    CHECK(time_window(5 * 60 + 59) == TimeWindow::early_morning);
    CHECK(time_window(6 * 60) == TimeWindow::morning_commute);
    CHECK(time_window(9 * 60) == TimeWindow::late_morning_early_afternoon);
    CHECK(time_window(15 * 60 + 29) == TimeWindow::late_morning_early_afternoon);
    CHECK(time_window(15 * 60 + 30) == TimeWindow::late_afternoon);
    CHECK(time_window(18 * 60 + 30) == TimeWindow::evening_overnight);
    // The overnight window wraps midnight.
    CHECK(time_window(0) == TimeWindow::evening_overnight);
    CHECK(time_window(2 * 60 + 59) == TimeWindow::evening_overnight);
    CHECK_THROWS_AS(time_window(-1), std::invalid_argument);
    CHECK_THROWS_AS(time_window(24 * 60), std::invalid_argument);
}

TEST_CASE("time windows partition the day") {
    int counts[kNumTimeWindows] = {};
    for (int minute = 0; minute < 24 * 60; ++minute)
        counts[static_cast<int>(time_window(minute))] += 1;
    CHECK(counts[static_cast<int>(TimeWindow::early_morning)] == 180);
    CHECK(counts[static_cast<int>(TimeWindow::morning_commute)] == 180);
    CHECK(counts[static_cast<int>(TimeWindow::late_morning_early_afternoon)] == 390);
    CHECK(counts[static_cast<int>(TimeWindow::late_afternoon)] == 180);
    CHECK(counts[static_cast<int>(TimeWindow::evening_overnight)] == 510);
}

TEST_CASE("window names round-trip") {
    for (TimeWindow w : kAllTimeWindows) {
        const auto parsed = window_from_name(window_name(w));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == w);
    }
    CHECK(window_name(TimeWindow::early_morning) == "Early Morning 3AM - 6AM");
    CHECK(!window_from_name("Midnight Snack").has_value());
}

TEST_CASE("timestamp parsing") {
    const auto t = CivilDateTime::parse("2022-03-04T15:30:00");
    REQUIRE(t.has_value());
    CHECK(t->minutes_of_day() == 15 * 60 + 30);
    CHECK(t->to_string() == "2022-03-04T15:30:00");
    CHECK(CivilDateTime::parse("2022-03-04 02:59").has_value());
    CHECK(time_window(*CivilDateTime::parse("2022-03-04 02:59")) ==
          TimeWindow::evening_overnight);
    CHECK(!CivilDateTime::parse("2022-03-04T15:30:00Z").has_value());
    CHECK(!CivilDateTime::parse("2022-13-04T15:30:00").has_value());
    CHECK(!CivilDateTime::parse("2022-03-04").has_value());
    CHECK(!CivilDateTime::parse("not a time").has_value());
}

TEST_CASE("serial seconds round-trip and order") {
    const CivilDateTime a{2022, 1, 1, 0, 0, 0};
    const CivilDateTime b{2022, 12, 31, 23, 59, 59};
    CHECK(a.to_seconds() < b.to_seconds());
    CHECK(CivilDateTime::from_seconds(a.to_seconds()) == a);
    CHECK(CivilDateTime::from_seconds(b.to_seconds()) == b);
    // 2024 is a leap year.
    const CivilDateTime c{2024, 2, 28, 12, 0, 0};
    CHECK(CivilDateTime::from_seconds(c.to_seconds() + 86400).day == 29);
}
