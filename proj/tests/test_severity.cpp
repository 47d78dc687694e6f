#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "dynbench/severity.hpp"

using namespace dynbench;

namespace {

SeverityFlags switrs(const std::string& severity, std::vector<std::string> equip = {}) {
    return classify_switrs(severity, equip);
}

}  // namespace

TEST_CASE("SWITRS severity codes") {
    const SeverityFlags k = switrs("K");
    CHECK(k.fatal);
    CHECK(k.serious_plus);
    CHECK(k.any_injury);
    CHECK(k.police_reported);
    CHECK_FALSE(k.airbag);

    const SeverityFlags a = switrs("A");
    CHECK_FALSE(a.fatal);
    CHECK(a.serious_plus);
    CHECK(a.any_injury);

    const SeverityFlags b = switrs("B", {"L"});
    CHECK(b.any_injury);
    CHECK(b.airbag);
    CHECK_FALSE(b.serious_plus);

    const SeverityFlags c = switrs("C", {"M"});
    CHECK(c.any_injury);
    CHECK(c.airbag);

    const SeverityFlags n = switrs("N");
    CHECK(n.police_reported);
    CHECK_FALSE(n.any_injury);
    CHECK_FALSE(n.airbag);
    CHECK_FALSE(n.serious_plus);
    CHECK_FALSE(n.fatal);

    // Equipment codes other than L/M do not mark a deployment.
    CHECK_FALSE(switrs("B", {"A", "G", "P"}).airbag);
    CHECK(switrs("0", {"G", "M"}).airbag);
}

TEST_CASE("ADOT airbag codes") {
    for (int code : {2, 3, 4, 5, 102, 103, 105}) CHECK(adot_airbag_deployed(code));
    for (int code : {0, 1, 6, 99, 100, 101, 104, 106}) CHECK_FALSE(adot_airbag_deployed(code));

    const SeverityFlags deployed = classify_adot(103, {});
    CHECK(deployed.airbag);
    CHECK(deployed.police_reported);
    CHECK_FALSE(classify_adot(1, {}).airbag);
}

TEST_CASE("ADOT injury flags are repaired upward") {
    SeverityFlags injury;
    injury.fatal = true;  // inconsistent input: fatal without any_injury
    const SeverityFlags repaired = classify_adot(0, injury);
    CHECK(repaired.fatal);
    CHECK(repaired.serious_plus);
    CHECK(repaired.any_injury);
    CHECK(repaired.police_reported);
    CHECK(repaired.monotone());
}

TEST_CASE("ADOT code map") {
    AdotCodeMap map;
    map.any_injury = {1, 2, 3, 4};
    map.serious_plus = {3, 4};
    map.fatal = {4};
    CHECK(classify_adot(0, map.injury_flags(4)).fatal);
    CHECK(classify_adot(0, map.injury_flags(3)).serious_plus);
    CHECK_FALSE(classify_adot(0, map.injury_flags(3)).fatal);
    CHECK(classify_adot(0, map.injury_flags(1)).any_injury);
    const SeverityFlags none = classify_adot(0, map.injury_flags(7));
    CHECK(none.police_reported);
    CHECK_FALSE(none.any_injury);
}

TEST_CASE("monotonicity fuzz") {
    std::mt19937_64 rng(42);
    const std::vector<std::string> severities = {"K", "A", "B", "C", "N", "0", ""};
    const std::vector<std::string> equipment = {"L", "M", "A", "G", "P", ""};
    for (int trial = 0; trial < 2000; ++trial) {
        const std::string& sev = severities[rng() % severities.size()];
        std::vector<std::string> equip;
        for (std::size_t k = 0; k < rng() % 4; ++k)
            equip.push_back(equipment[rng() % equipment.size()]);
        CHECK(classify_switrs(sev, equip).monotone());

        SeverityFlags raw;
        raw.any_injury = rng() % 2;
        raw.serious_plus = rng() % 2;
        raw.fatal = rng() % 2;
        CHECK(classify_adot(static_cast<int>(rng() % 120), raw).monotone());
        CHECK(raw.repaired().monotone());
    }
}

TEST_CASE("severity matching") {
    const SeverityFlags k = switrs("K");
    CHECK(k.matches(SeverityLevel::police_reported));
    CHECK(k.matches(SeverityLevel::any_injury));
    CHECK(k.matches(SeverityLevel::serious_plus));
    CHECK(k.matches(SeverityLevel::fatal));
    CHECK_FALSE(k.matches(SeverityLevel::airbag));
}

TEST_CASE("underreporting adjustment") {
    CHECK(apply_underreporting(68.0, SeverityLevel::any_injury) ==
          Catch::Approx(100.0).margin(1e-9));
    CHECK(apply_underreporting(68.0, SeverityLevel::police_reported) == 68.0);
    CHECK(apply_underreporting(68.0, SeverityLevel::airbag) == 68.0);
    CHECK(apply_underreporting(68.0, SeverityLevel::serious_plus) == 68.0);
    CHECK(apply_underreporting(68.0, SeverityLevel::fatal) == 68.0);
    CHECK(apply_underreporting(0.0, SeverityLevel::any_injury) == 0.0);

    Underreporting multiply;
    multiply.formula = Underreporting::Formula::multiply;
    CHECK(apply_underreporting(68.0, SeverityLevel::any_injury, multiply) ==
          Catch::Approx(68.0 * 1.32));

    Underreporting bad;
    bad.factor = 1.0;
    CHECK_THROWS_AS(apply_underreporting(1.0, SeverityLevel::any_injury, bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_underreporting(-1.0, SeverityLevel::any_injury),
                    std::invalid_argument);
}

TEST_CASE("severity names round-trip") {
    for (SeverityLevel level : kAllSeverityLevels) {
        const auto parsed = severity_from_name(severity_name(level));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == level);
    }
    CHECK(!severity_from_name("catastrophic").has_value());
}
