#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dynbench/geo.hpp"
#include "dynbench/severity.hpp"
#include "dynbench/time.hpp"

namespace dynbench {

enum class CrashSource { switrs, adot, canonical };

inline std::string_view crash_source_name(CrashSource s) {
    switch (s) {
        case CrashSource::switrs: return "SWITRS";
        case CrashSource::adot: return "ADOT";
        case CrashSource::canonical: return "CANONICAL";
    }
    return "";
}

inline std::optional<CrashSource> crash_source_from_name(std::string_view name) {
    if (name == "SWITRS") return CrashSource::switrs;
    if (name == "ADOT") return CrashSource::adot;
    if (name == "CANONICAL") return CrashSource::canonical;
    return std::nullopt;
}

// One crashed-vehicle event. Road-type and body-type filters arrive as
// precomputed booleans; the source is kept for audit.
struct CrashRecord {
    std::string id;
    std::optional<GeoPoint> location;
    std::optional<CivilDateTime> occurred_at;
    CrashSource source = CrashSource::canonical;
    SeverityFlags severity;
    bool is_surface_street = true;
    bool is_passenger_vehicle = true;

    friend bool operator==(const CrashRecord&, const CrashRecord&) = default;
};

// One ADS mileage observation, either a located point or a pre-binned cell.
struct AdsMileageRecord {
    std::optional<GeoPoint> location;
    std::optional<CellId> cell;
    double miles = 0.0;
    std::optional<CivilDateTime> recorded_at;
    std::string fleet_tag;

    friend bool operator==(const AdsMileageRecord&, const AdsMileageRecord&) = default;
};

// Row accounting for a crash load; kept + dropped categories always
// reconcile with the input row count.
struct DropReport {
    std::int64_t rows_in = 0;
    std::int64_t kept = 0;
    std::int64_t missing_location = 0;
    std::int64_t not_surface_street = 0;
    std::int64_t not_passenger_vehicle = 0;

    std::int64_t dropped() const {
        return missing_location + not_surface_street + not_passenger_vehicle;
    }
    bool reconciles() const { return kept + dropped() == rows_in; }
};

}  // namespace dynbench
