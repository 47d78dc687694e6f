#pragma once

// File ingestion: crash files (canonical, SWITRS, ADOT), ADS mileage files,
// time-of-day share tables, and the matching canonical writers.

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynbench/csv.hpp"
#include "dynbench/records.hpp"

namespace dynbench {

enum class CrashFormat { canonical, switrs, adot };

inline std::optional<CrashFormat> crash_format_from_name(std::string_view name) {
    if (name == "canonical") return CrashFormat::canonical;
    if (name == "switrs") return CrashFormat::switrs;
    if (name == "adot") return CrashFormat::adot;
    return std::nullopt;
}

struct CrashLoadOptions {
    bool filter_surface_street = true;
    bool filter_passenger_vehicle = true;
    AdotCodeMap adot_codes;
};

struct CrashLoadResult {
    std::vector<CrashRecord> records;
    DropReport drops;
};

namespace detail {

inline std::optional<GeoPoint> parse_location(const csv::Table& table, std::size_t row,
                                              std::size_t lat_col, std::size_t lng_col) {
    const std::string& lat = table.field(row, lat_col);
    const std::string& lng = table.field(row, lng_col);
    if (lat.empty() && lng.empty()) return std::nullopt;
    if (lat.empty() || lng.empty())
        throw ParseError(table.path(), table.line_of(row), "one of lat/lng is empty");
    try {
        return GeoPoint(table.number(row, lat_col), table.number(row, lng_col));
    } catch (const std::invalid_argument& e) {
        throw ParseError(table.path(), table.line_of(row), e.what());
    }
}

inline std::optional<CivilDateTime> parse_timestamp(const csv::Table& table, std::size_t row,
                                                    std::size_t col) {
    const std::string& text = table.field(row, col);
    if (text.empty()) return std::nullopt;
    const auto t = CivilDateTime::parse(text);
    if (!t)
        throw ParseError(table.path(), table.line_of(row), "invalid timestamp '" + text + "'");
    return t;
}

// Optional boolean column: absent column or empty field defaults.
inline bool optional_bool(const csv::Table& table, std::size_t row,
                          const std::optional<std::size_t>& col, bool fallback) {
    if (!col || table.field(row, *col).empty()) return fallback;
    return table.boolean(row, *col);
}

inline std::string row_id(const csv::Table& table, std::size_t row,
                          const std::optional<std::size_t>& id_col) {
    if (id_col && !table.field(row, *id_col).empty()) return table.field(row, *id_col);
    return "row" + std::to_string(table.line_of(row));
}

}  // namespace detail

inline CrashLoadResult load_crashes(const std::filesystem::path& path, CrashFormat format,
                                    const CrashLoadOptions& options = {}) {
    const csv::Table table(path);
    CrashLoadResult result;
    result.drops.rows_in = static_cast<std::int64_t>(table.row_count());
    result.records.reserve(table.row_count());

    std::size_t lat_col, lng_col;
    std::optional<std::size_t> id_col, time_col, surface_col, passenger_col;
    // Format-specific severity columns.
    std::size_t severity_col = 0;
    std::array<std::size_t, 4> equip_cols{};
    std::size_t airbag_col = 0, injury_col = 0;
    std::array<std::optional<std::size_t>, 4> flag_cols;  // any_injury,airbag,serious_plus,fatal
    std::optional<std::size_t> source_col;

    switch (format) {
        case CrashFormat::canonical:
            id_col = table.require_column("crash_id");
            lat_col = table.require_column("lat");
            lng_col = table.require_column("lng");
            time_col = table.require_column("occurred_at");
            source_col = table.require_column("source");
            surface_col = table.require_column("is_surface_street");
            passenger_col = table.require_column("is_passenger_vehicle");
            flag_cols = {table.require_column("any_injury"), table.require_column("airbag"),
                         table.require_column("serious_plus"), table.require_column("fatal")};
            break;
        case CrashFormat::switrs:
            severity_col = table.require_column("collision_severity");
            equip_cols = {table.require_column("victim_safety_equip_1"),
                          table.require_column("victim_safety_equip_2"),
                          table.require_column("party_safety_equip_1"),
                          table.require_column("party_safety_equip_2")};
            lat_col = table.require_column("lat");
            lng_col = table.require_column("lng");
            id_col = table.find_column("crash_id");
            time_col = table.find_column("occurred_at");
            surface_col = table.find_column("is_surface_street");
            passenger_col = table.find_column("is_passenger_vehicle");
            break;
        case CrashFormat::adot:
            airbag_col = table.require_column("Airbag");
            injury_col = table.require_column("InjuryStatus");
            lat_col = table.require_column("lat");
            lng_col = table.require_column("lng");
            id_col = table.find_column("crash_id");
            time_col = table.find_column("occurred_at");
            surface_col = table.find_column("is_surface_street");
            passenger_col = table.find_column("is_passenger_vehicle");
            break;
    }

    std::set<std::string> seen_ids;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        CrashRecord rec;
        rec.id = detail::row_id(table, r, id_col);
        if (!seen_ids.insert(rec.id).second)
            throw ParseError(path, table.line_of(r), "duplicate crash_id '" + rec.id + "'");
        rec.location = detail::parse_location(table, r, lat_col, lng_col);
        if (time_col) rec.occurred_at = detail::parse_timestamp(table, r, *time_col);
        rec.is_surface_street = detail::optional_bool(table, r, surface_col, true);
        rec.is_passenger_vehicle = detail::optional_bool(table, r, passenger_col, true);

        switch (format) {
            case CrashFormat::canonical: {
                const auto src = crash_source_from_name(table.field(r, *source_col));
                if (!src)
                    throw ParseError(path, table.line_of(r),
                                     "unknown source '" + table.field(r, *source_col) + "'");
                rec.source = *src;
                SeverityFlags flags;
                flags.police_reported = true;
                flags.any_injury = table.boolean(r, *flag_cols[0]);
                flags.airbag = table.boolean(r, *flag_cols[1]);
                flags.serious_plus = table.boolean(r, *flag_cols[2]);
                flags.fatal = table.boolean(r, *flag_cols[3]);
                rec.severity = flags.repaired();
                break;
            }
            case CrashFormat::switrs: {
                rec.source = CrashSource::switrs;
                std::vector<std::string> equip;
                for (std::size_t col : equip_cols)
                    if (!table.field(r, col).empty()) equip.push_back(table.field(r, col));
                rec.severity = classify_switrs(table.field(r, severity_col), equip);
                break;
            }
            case CrashFormat::adot: {
                rec.source = CrashSource::adot;
                const int airbag = table.field(r, airbag_col).empty()
                                       ? 0
                                       : static_cast<int>(table.integer(r, airbag_col));
                SeverityFlags injury;
                if (!table.field(r, injury_col).empty())
                    injury = options.adot_codes.injury_flags(
                        static_cast<int>(table.integer(r, injury_col)));
                rec.severity = classify_adot(airbag, injury);
                break;
            }
        }

        if (!rec.location) {
            ++result.drops.missing_location;
        } else if (options.filter_surface_street && !rec.is_surface_street) {
            ++result.drops.not_surface_street;
        } else if (options.filter_passenger_vehicle && !rec.is_passenger_vehicle) {
            ++result.drops.not_passenger_vehicle;
        } else {
            ++result.drops.kept;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

inline void write_crashes_canonical(const std::filesystem::path& path,
                                    std::span<const CrashRecord> records) {
    csv::Writer out(path);
    out.row({"crash_id", "lat", "lng", "occurred_at", "source", "is_surface_street",
             "is_passenger_vehicle", "any_injury", "airbag", "serious_plus", "fatal"});
    const auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    for (const CrashRecord& rec : records) {
        out.row({rec.id, rec.location ? csv::format_double(rec.location->lat) : "",
                 rec.location ? csv::format_double(rec.location->lng) : "",
                 rec.occurred_at ? rec.occurred_at->to_string() : "",
                 std::string(crash_source_name(rec.source)), b(rec.is_surface_street),
                 b(rec.is_passenger_vehicle), b(rec.severity.any_injury), b(rec.severity.airbag),
                 b(rec.severity.serious_plus), b(rec.severity.fatal)});
    }
}

// ADS mileage files come in two shapes, detected from the header: located
// points (lat,lng,...) or pre-binned cells (cell_id,...).
inline std::vector<AdsMileageRecord> load_ads_miles(const std::filesystem::path& path) {
    const csv::Table table(path);
    const bool prebinned = table.find_column("cell_id").has_value();
    std::size_t lat_col = 0, lng_col = 0, cell_col = 0;
    if (prebinned) {
        cell_col = table.require_column("cell_id");
    } else {
        lat_col = table.require_column("lat");
        lng_col = table.require_column("lng");
    }
    const std::size_t miles_col = table.require_column("miles");
    const auto time_col = table.find_column("recorded_at");
    const auto fleet_col = table.find_column("fleet_tag");

    std::vector<AdsMileageRecord> records;
    records.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        AdsMileageRecord rec;
        if (prebinned) {
            try {
                rec.cell = CellId::from_token(table.field(r, cell_col));
            } catch (const std::invalid_argument& e) {
                throw ParseError(path, table.line_of(r), e.what());
            }
        } else {
            rec.location = detail::parse_location(table, r, lat_col, lng_col);
            if (!rec.location)
                throw ParseError(path, table.line_of(r), "ads mileage record without location");
        }
        rec.miles = table.number(r, miles_col);
        if (!(rec.miles >= 0.0))
            throw ParseError(path, table.line_of(r), "miles must be >= 0");
        if (time_col) rec.recorded_at = detail::parse_timestamp(table, r, *time_col);
        if (fleet_col) rec.fleet_tag = table.field(r, *fleet_col);
        records.push_back(std::move(rec));
    }
    return records;
}

inline void write_ads_miles(const std::filesystem::path& path,
                            std::span<const AdsMileageRecord> records) {
    csv::Writer out(path);
    out.row({"lat", "lng", "miles", "recorded_at", "fleet_tag"});
    for (const AdsMileageRecord& rec : records) {
        if (!rec.location) throw std::invalid_argument("write_ads_miles: record without location");
        out.row({csv::format_double(rec.location->lat), csv::format_double(rec.location->lng),
                 csv::format_double(rec.miles),
                 rec.recorded_at ? rec.recorded_at->to_string() : "", rec.fleet_tag});
    }
}

// Five-row `window,human_vmt_share` table covering each time window exactly
// once. Shares are normalized, so percentages and fractions both work.
inline std::array<double, kNumTimeWindows> load_time_shares(const std::filesystem::path& path) {
    const csv::Table table(path);
    const std::size_t window_col = table.require_column("window");
    const std::size_t share_col = table.require_column("human_vmt_share");
    std::array<double, kNumTimeWindows> shares{};
    std::array<bool, kNumTimeWindows> seen{};
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const auto w = window_from_name(table.field(r, window_col));
        if (!w)
            throw ParseError(path, table.line_of(r),
                             "unknown time window '" + table.field(r, window_col) + "'");
        const auto idx = static_cast<std::size_t>(*w);
        if (seen[idx])
            throw ParseError(path, table.line_of(r),
                             "duplicate time window '" + table.field(r, window_col) + "'");
        seen[idx] = true;
        const double share = table.number(r, share_col);
        if (!(share >= 0.0))
            throw ParseError(path, table.line_of(r), "share must be >= 0");
        shares[idx] = share;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < shares.size(); ++k) {
        if (!seen[k])
            throw ParseError(path, 1,
                             "missing time window '" + std::string(window_name(kAllTimeWindows[k])) +
                                 "'");
        total += shares[k];
    }
    if (!(total > 0.0)) throw ParseError(path, 1, "shares sum to zero");
    for (double& s : shares) s /= total;
    return shares;
}

// Per-window relative crash rates keyed by severity column name.
inline std::map<SeverityLevel, std::array<double, kNumTimeWindows>> load_window_rates(
    const std::filesystem::path& path) {
    const csv::Table table(path);
    const std::size_t window_col = table.require_column("window");
    std::map<SeverityLevel, std::size_t> columns;
    for (SeverityLevel level : kAllSeverityLevels)
        if (auto col = table.find_column(severity_name(level))) columns[level] = *col;
    if (columns.empty()) throw ParseError(path, 1, "no severity rate columns found");
    if (table.row_count() != kNumTimeWindows)
        throw ParseError(path, 1, "expected exactly one row per time window");

    std::map<SeverityLevel, std::array<double, kNumTimeWindows>> rates;
    std::array<bool, kNumTimeWindows> seen{};
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const auto w = window_from_name(table.field(r, window_col));
        if (!w)
            throw ParseError(path, table.line_of(r),
                             "unknown time window '" + table.field(r, window_col) + "'");
        const auto idx = static_cast<std::size_t>(*w);
        if (seen[idx]) throw ParseError(path, table.line_of(r), "duplicate time window");
        seen[idx] = true;
        for (const auto& [level, col] : columns) {
            const double rate = table.number(r, col);
            if (!(rate >= 0.0)) throw ParseError(path, table.line_of(r), "rate must be >= 0");
            rates[level][idx] = rate;
        }
    }
    return rates;
}

inline AdotCodeMap load_adot_codemap(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid ADOT code map " + path.string() + ": " + e.what());
    }
    AdotCodeMap map;
    const auto read_codes = [&](const char* key, std::set<int>& out) {
        if (!doc.contains(key)) return;
        for (const auto& v : doc.at(key)) out.insert(v.get<int>());
    };
    read_codes("any_injury", map.any_injury);
    read_codes("serious_plus", map.serious_plus);
    read_codes("fatal", map.fatal);
    return map;
}

}  // namespace dynbench
