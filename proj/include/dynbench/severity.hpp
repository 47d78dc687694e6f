#pragma once

// Crash severity classification for the SWITRS and ADOT source vocabularies,
// plus the underreporting adjustment applied to injury counts.

#include <array>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dynbench {

enum class SeverityLevel { police_reported, any_injury, airbag, serious_plus, fatal };

inline constexpr std::array<SeverityLevel, 5> kAllSeverityLevels = {
    SeverityLevel::police_reported, SeverityLevel::any_injury, SeverityLevel::airbag,
    SeverityLevel::serious_plus, SeverityLevel::fatal};

inline std::string_view severity_name(SeverityLevel level) {
    switch (level) {
        case SeverityLevel::police_reported: return "police_reported";
        case SeverityLevel::any_injury: return "any_injury";
        case SeverityLevel::airbag: return "airbag";
        case SeverityLevel::serious_plus: return "serious_plus";
        case SeverityLevel::fatal: return "fatal";
    }
    return "";
}

inline std::optional<SeverityLevel> severity_from_name(std::string_view name) {
    for (SeverityLevel level : kAllSeverityLevels)
        if (severity_name(level) == name) return level;
    return std::nullopt;
}

// Severity flags are monotone: fatal => serious_plus => any_injury =>
// police_reported, and airbag => police_reported.
struct SeverityFlags {
    bool police_reported = false;
    bool any_injury = false;
    bool airbag = false;
    bool serious_plus = false;
    bool fatal = false;

    friend bool operator==(const SeverityFlags&, const SeverityFlags&) = default;

    bool monotone() const {
        return (!fatal || serious_plus) && (!serious_plus || any_injury) &&
               (!any_injury || police_reported) && (!airbag || police_reported);
    }

    // Propagates implied flags upward so the monotonicity invariant holds.
    SeverityFlags repaired() const {
        SeverityFlags out = *this;
        if (out.fatal) out.serious_plus = true;
        if (out.serious_plus) out.any_injury = true;
        if (out.any_injury || out.airbag) out.police_reported = true;
        return out;
    }

    bool matches(SeverityLevel level) const {
        switch (level) {
            case SeverityLevel::police_reported: return police_reported;
            case SeverityLevel::any_injury: return any_injury;
            case SeverityLevel::airbag: return airbag;
            case SeverityLevel::serious_plus: return serious_plus;
            case SeverityLevel::fatal: return fatal;
        }
        return false;
    }
};

// SWITRS: collision_severity codes K/A/B/C mark injury tiers; safety
// equipment codes L/M on any victim or party mark airbag deployment.
// Unknown codes yield false flags.
inline SeverityFlags classify_switrs(std::string_view collision_severity,
                                     std::span<const std::string> safety_equip_codes) {
    SeverityFlags flags;
    flags.police_reported = true;
    flags.fatal = collision_severity == "K";
    flags.serious_plus = flags.fatal || collision_severity == "A";
    flags.any_injury = flags.serious_plus || collision_severity == "B" || collision_severity == "C";
    for (const std::string& code : safety_equip_codes)
        if (code == "L" || code == "M") flags.airbag = true;
    return flags;
}

// ADOT airbag codes indicating a deployment.
inline bool adot_airbag_deployed(int airbag_code) {
    switch (airbag_code) {
        case 2: case 3: case 4: case 5: case 102: case 103: case 105: return true;
        default: return false;
    }
}

// ADOT injury tiers come from a configurable InjuryStatus code map; the
// resulting flags are monotonicity-repaired upward.
inline SeverityFlags classify_adot(int airbag_code, const SeverityFlags& injury_flags) {
    SeverityFlags flags = injury_flags;
    flags.police_reported = true;
    flags.airbag = adot_airbag_deployed(airbag_code);
    return flags.repaired();
}

// InjuryStatus value lists per injury tier, supplied by configuration.
struct AdotCodeMap {
    std::set<int> any_injury;
    std::set<int> serious_plus;
    std::set<int> fatal;

    SeverityFlags injury_flags(int injury_status) const {
        SeverityFlags flags;
        flags.any_injury = any_injury.contains(injury_status);
        flags.serious_plus = serious_plus.contains(injury_status);
        flags.fatal = fatal.contains(injury_status);
        return flags;
    }
};

struct Underreporting {
    enum class Formula { divide, multiply };

    double factor = 0.32;
    Formula formula = Formula::divide;
};

inline std::string_view underreporting_formula_name(Underreporting::Formula f) {
    return f == Underreporting::Formula::divide ? "divide" : "multiply";
}

inline std::optional<Underreporting::Formula> underreporting_formula_from_name(
    std::string_view name) {
    if (name == "divide") return Underreporting::Formula::divide;
    if (name == "multiply") return Underreporting::Formula::multiply;
    return std::nullopt;
}

// Only any-injury counts carry an underreporting correction: the reported
// count is treated as (1 - factor) of the true count under the default
// divide formula, or inflated by (1 + factor) under the multiply variant.
inline double apply_underreporting(double count, SeverityLevel level,
                                   const Underreporting& config = {}) {
    if (count < 0.0) throw std::invalid_argument("apply_underreporting: negative count");
    if (!(config.factor >= 0.0 && config.factor < 1.0))
        throw std::invalid_argument("apply_underreporting: factor must be in [0, 1)");
    if (level != SeverityLevel::any_injury) return count;
    return config.formula == Underreporting::Formula::divide ? count / (1.0 - config.factor)
                                                             : count * (1.0 + config.factor);
}

}  // namespace dynbench
