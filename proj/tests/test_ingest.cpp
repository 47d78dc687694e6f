#include <catch_amalgamated.hpp>

#include "dynbench/ingest.hpp"
#include "temp_dir.hpp"

using namespace dynbench;
using dynbench::test::TempDir;

namespace {

const char* kCanonicalHeader =
    "crash_id,lat,lng,occurred_at,source,is_surface_street,is_passenger_vehicle,"
    "any_injury,airbag,serious_plus,fatal\n";

}  // namespace

TEST_CASE("canonical loader counts drops and reconciles") {
    TempDir dir;
    std::string body(kCanonicalHeader);
    for (int k = 0; k < 6; ++k)
        body += "c" + std::to_string(k) +
                ",37.7,-122.4,2022-05-01T10:00:00,CANONICAL,true,true,false,false,false,false\n";
    body += "m1,,,2022-05-01T10:00:00,CANONICAL,true,true,false,false,false,false\n";
    body += "m2,,,2022-05-01T10:00:00,CANONICAL,true,true,false,false,false,false\n";
    body += "f1,37.7,-122.4,2022-05-01T10:00:00,CANONICAL,false,true,false,false,false,false\n";
    body += "f2,37.7,-122.4,2022-05-01T10:00:00,CANONICAL,true,false,false,false,false,false\n";
    const auto path = dir.write("crashes.csv", body);

    const CrashLoadResult result = load_crashes(path, CrashFormat::canonical);
    CHECK(result.records.size() == 6);
    CHECK(result.drops.rows_in == 10);
    CHECK(result.drops.kept == 6);
    CHECK(result.drops.missing_location == 2);
    CHECK(result.drops.not_surface_street == 1);
    CHECK(result.drops.not_passenger_vehicle == 1);
    CHECK(result.drops.reconciles());
}

TEST_CASE("empty canonical file with valid header") {
    TempDir dir;
    const auto path = dir.write("empty.csv", kCanonicalHeader);
    const CrashLoadResult result = load_crashes(path, CrashFormat::canonical);
    CHECK(result.records.empty());
    CHECK(result.drops.rows_in == 0);
    CHECK(result.drops.reconciles());
}

TEST_CASE("out-of-range latitude names the row") {
    TempDir dir;
    const auto path = dir.write(
        "bad.csv", std::string(kCanonicalHeader) +
                       "c1,91,-122.4,,CANONICAL,true,true,false,false,false,false\n");
    try {
        load_crashes(path, CrashFormat::canonical);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("latitude") != std::string::npos);
    }
}

TEST_CASE("malformed rows raise errors naming the line") {
    TempDir dir;
    const auto wrong_fields = dir.write(
        "wrong.csv", std::string(kCanonicalHeader) + "c1,37.7,-122.4\n");
    CHECK_THROWS_AS(load_crashes(wrong_fields, CrashFormat::canonical), ParseError);

    const auto dup = dir.write(
        "dup.csv", std::string(kCanonicalHeader) +
                       "c1,37.7,-122.4,,CANONICAL,true,true,false,false,false,false\n"
                       "c1,37.7,-122.4,,CANONICAL,true,true,false,false,false,false\n");
    CHECK_THROWS_AS(load_crashes(dup, CrashFormat::canonical), ParseError);

    const auto bad_bool = dir.write(
        "badbool.csv", std::string(kCanonicalHeader) +
                           "c1,37.7,-122.4,,CANONICAL,true,true,maybe,false,false,false\n");
    CHECK_THROWS_AS(load_crashes(bad_bool, CrashFormat::canonical), ParseError);

    const auto missing_col = dir.write("nocol.csv", "crash_id,lat,lng\n");
    CHECK_THROWS_AS(load_crashes(missing_col, CrashFormat::canonical), ParseError);

    CHECK_THROWS(load_crashes(dir.path() / "nonexistent.csv", CrashFormat::canonical));
}

TEST_CASE("canonical round-trip is exact") {
    TempDir dir;
    const auto path = dir.write(
        "in.csv", std::string(kCanonicalHeader) +
                      "a1,37.774929,-122.419416,2022-07-04T23:15:00,SWITRS,true,true,"
                      "true,true,false,false\n"
                      "a2,33.448377,-112.074037,,ADOT,true,true,true,false,true,true\n"
                      "a3,34.052235,-118.243683,2022-01-31T03:00:00,CANONICAL,true,true,"
                      "false,false,false,false\n");
    const CrashLoadResult first = load_crashes(path, CrashFormat::canonical);
    REQUIRE(first.records.size() == 3);
    const auto out = dir.path() / "out.csv";
    write_crashes_canonical(out, first.records);
    const CrashLoadResult second = load_crashes(out, CrashFormat::canonical);
    CHECK(first.records == second.records);
}

TEST_CASE("SWITRS adapter") {
    TempDir dir;
    const auto path = dir.write(
        "switrs.csv",
        "collision_severity,victim_safety_equip_1,victim_safety_equip_2,"
        "party_safety_equip_1,party_safety_equip_2,lat,lng,occurred_at\n"
        "K,,,,,37.70,-122.40,2022-02-01T08:00:00\n"
        "B,L,,,,37.71,-122.41,2022-02-02T09:00:00\n"
        "N,,,M,,37.72,-122.42,2022-02-03T10:00:00\n"
        "N,,,,,37.73,-122.43,2022-02-04T11:00:00\n");
    const CrashLoadResult result = load_crashes(path, CrashFormat::switrs);
    REQUIRE(result.records.size() == 4);
    CHECK(result.records[0].severity.fatal);
    CHECK(result.records[0].source == CrashSource::switrs);
    CHECK(result.records[1].severity.any_injury);
    CHECK(result.records[1].severity.airbag);
    CHECK_FALSE(result.records[1].severity.serious_plus);
    CHECK(result.records[2].severity.airbag);
    CHECK_FALSE(result.records[2].severity.any_injury);
    CHECK(result.records[3].severity.police_reported);
    CHECK_FALSE(result.records[3].severity.airbag);
    // Generated ids are unique.
    CHECK(result.records[0].id != result.records[1].id);
}

TEST_CASE("ADOT adapter with code map") {
    TempDir dir;
    const auto map_path = dir.write(
        "codes.json", R"({"any_injury":[1,2,3],"serious_plus":[2,3],"fatal":[3]})");
    const AdotCodeMap map = load_adot_codemap(map_path);
    CrashLoadOptions options;
    options.adot_codes = map;

    const auto path = dir.write("adot.csv",
                                "Airbag,InjuryStatus,lat,lng\n"
                                "103,0,33.44,-112.07\n"
                                "1,3,33.45,-112.08\n"
                                ",,33.46,-112.09\n");
    const CrashLoadResult result = load_crashes(path, CrashFormat::adot, options);
    REQUIRE(result.records.size() == 3);
    CHECK(result.records[0].severity.airbag);
    CHECK_FALSE(result.records[0].severity.any_injury);
    CHECK(result.records[1].severity.fatal);
    CHECK(result.records[1].severity.serious_plus);
    CHECK(result.records[1].severity.any_injury);
    CHECK_FALSE(result.records[1].severity.airbag);
    CHECK(result.records[2].severity.police_reported);
    CHECK(result.records[2].source == CrashSource::adot);
}

TEST_CASE("vehicle and road filters are configurable") {
    TempDir dir;
    const auto path = dir.write(
        "crashes.csv", std::string(kCanonicalHeader) +
                           "c1,37.7,-122.4,,CANONICAL,true,false,false,false,false,false\n");
    CrashLoadOptions keep_all;
    keep_all.filter_passenger_vehicle = false;
    const CrashLoadResult kept = load_crashes(path, CrashFormat::canonical, keep_all);
    CHECK(kept.records.size() == 1);
    const CrashLoadResult dropped = load_crashes(path, CrashFormat::canonical);
    CHECK(dropped.records.empty());
    CHECK(dropped.drops.not_passenger_vehicle == 1);
}

TEST_CASE("ads mileage loader, point form") {
    TempDir dir;
    const auto path = dir.write("ads.csv",
                                "lat,lng,miles,recorded_at,fleet_tag\n"
                                "37.70,-122.40,1.5,2024-01-01T02:00:00,alpha\n"
                                "37.71,-122.41,2.5,,\n");
    const auto records = load_ads_miles(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].miles == 1.5);
    CHECK(records[0].fleet_tag == "alpha");
    REQUIRE(records[0].recorded_at.has_value());
    CHECK(!records[1].recorded_at.has_value());

    const auto neg = dir.write("neg.csv", "lat,lng,miles,recorded_at,fleet_tag\n"
                                          "37.70,-122.40,-1,,\n");
    CHECK_THROWS_AS(load_ads_miles(neg), ParseError);
}

TEST_CASE("ads mileage loader, pre-binned form") {
    TempDir dir;
    const CellId cell = cell_from_point({37.76, -122.44}, 13);
    const auto path = dir.write("ads.csv", "cell_id,miles,recorded_at,fleet_tag\n" +
                                               cell.token() + ",4.25,,\n");
    const auto records = load_ads_miles(path);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].cell.has_value());
    CHECK(*records[0].cell == cell);

    const auto bad = dir.write("bad.csv", "cell_id,miles,recorded_at,fleet_tag\nnot-a-cell,1,,\n");
    CHECK_THROWS_AS(load_ads_miles(bad), ParseError);
}

TEST_CASE("ads round-trip through the writer") {
    TempDir dir;
    std::vector<AdsMileageRecord> records(2);
    records[0].location = GeoPoint{37.7, -122.4};
    records[0].miles = 3.25;
    records[0].recorded_at = CivilDateTime{2024, 3, 1, 15, 45, 0};
    records[0].fleet_tag = "ipace";
    records[1].location = GeoPoint{37.8, -122.5};
    records[1].miles = 0.75;
    const auto path = dir.path() / "ads.csv";
    write_ads_miles(path, records);
    CHECK(load_ads_miles(path) == records);
}

TEST_CASE("time share table") {
    TempDir dir;
    const auto path = dir.write("shares.csv",
                                "window,human_vmt_share\n"
                                "Early Morning 3AM - 6AM,2.8\n"
                                "Morning Commute 6AM - 9AM,14.9\n"
                                "Late Morning & Early Afternoon 9AM - 3:30PM,37.9\n"
                                "Late Afternoon 3:30PM - 6:30PM,20.4\n"
                                "Evening & Overnight 6:30PM - 3AM,24.1\n");
    const auto shares = load_time_shares(path);
    double sum = 0.0;
    for (double s : shares) sum += s;
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    CHECK(shares[static_cast<int>(TimeWindow::early_morning)] == Catch::Approx(0.028));

    const auto missing = dir.write("missing.csv",
                                   "window,human_vmt_share\nEarly Morning 3AM - 6AM,1\n");
    CHECK_THROWS_AS(load_time_shares(missing), ParseError);
    const auto unknown = dir.write("unknown.csv", "window,human_vmt_share\nBrunch,1\n");
    CHECK_THROWS_AS(load_time_shares(unknown), ParseError);
}

TEST_CASE("window rate table") {
    TempDir dir;
    const auto path = dir.write("rates.csv",
                                "window,police_reported,fatal\n"
                                "Early Morning 3AM - 6AM,1.31,0.92\n"
                                "Morning Commute 6AM - 9AM,0.66,0.34\n"
                                "Late Morning & Early Afternoon 9AM - 3:30PM,0.96,1.15\n"
                                "Late Afternoon 3:30PM - 6:30PM,0.99,1.39\n"
                                "Evening & Overnight 6:30PM - 3AM,1.25,0.85\n");
    const auto rates = load_window_rates(path);
    REQUIRE(rates.contains(SeverityLevel::police_reported));
    REQUIRE(rates.contains(SeverityLevel::fatal));
    CHECK(!rates.contains(SeverityLevel::any_injury));
    CHECK(rates.at(SeverityLevel::police_reported)[static_cast<int>(
              TimeWindow::evening_overnight)] == 1.25);

    const auto empty = dir.write("none.csv", "window,foo\nEarly Morning 3AM - 6AM,1\n");
    CHECK_THROWS_AS(load_window_rates(empty), ParseError);
}
