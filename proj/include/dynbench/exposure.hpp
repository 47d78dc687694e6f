#pragma once

// Exposure tables: per-slice human VMT and ADS miles with totals and shares.
// Slices are either grid cells (spatial analysis) or time-of-day windows
// (temporal analysis); the two dimensions are never mixed in one table.

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "dynbench/csv.hpp"
#include "dynbench/geojson.hpp"
#include "dynbench/records.hpp"

namespace dynbench {

enum class Dimension { cell, window };

using SliceKey = std::variant<CellId, TimeWindow>;

inline Dimension dimension_of(const SliceKey& key) {
    return std::holds_alternative<CellId>(key) ? Dimension::cell : Dimension::window;
}

inline std::string slice_token(const SliceKey& key) {
    if (const auto* cell = std::get_if<CellId>(&key)) return cell->token();
    return std::string(window_name(std::get<TimeWindow>(key)));
}

struct ExposureRow {
    double human_vmt = 0.0;  // miles (relative unless calibrated)
    double ads_miles = 0.0;
};

// A retained row always has human_vmt > 0; ADS miles landing in slices
// without human VMT are excluded and accounted for separately.
struct ExposureTable {
    Dimension dim = Dimension::cell;
    std::map<SliceKey, ExposureRow> rows;
    double human_total = 0.0;     // M_H over retained slices
    double ads_total = 0.0;       // M_W over retained slices
    double excluded_ads_miles = 0.0;

    double excluded_fraction() const {
        const double denom = excluded_ads_miles + ads_total;
        return denom > 0.0 ? excluded_ads_miles / denom : 0.0;
    }

    double human_share(const SliceKey& key) const {
        const auto it = rows.find(key);
        return it == rows.end() || human_total <= 0.0 ? 0.0 : it->second.human_vmt / human_total;
    }

    double ads_share(const SliceKey& key) const {
        const auto it = rows.find(key);
        return it == rows.end() || ads_total <= 0.0 ? 0.0 : it->second.ads_miles / ads_total;
    }
};

// Relative human VMT per cell: road length x AADT, spread over the cells a
// segment crosses in proportion to length. Units are relative until
// calibrated against an aggregate mileage total.
inline std::map<CellId, double> relative_vmt(std::span<const RoadSegment> segments, int level,
                                             double step_m = 10.0) {
    std::map<CellId, double> vmt;
    for (const RoadSegment& seg : segments) {
        const double length_miles = seg.geometry.length_m() / kMetersPerMile;
        if (length_miles <= 0.0) continue;
        const CellAllocation alloc = allocate_polyline(seg.geometry, level, step_m);
        for (const auto& [cell, fraction] : alloc.entries)
            vmt[cell] += length_miles * seg.aadt * fraction;
    }
    return vmt;
}

// Scales values so they sum to target_total.
template <typename Key>
std::map<Key, double> calibrate(const std::map<Key, double>& values, double target_total) {
    if (!(target_total > 0.0)) throw std::invalid_argument("calibrate: target_total must be > 0");
    double sum = 0.0;
    for (const auto& [key, v] : values) sum += v;
    if (!(sum > 0.0)) throw std::invalid_argument("calibrate: input sums to zero");
    const double k = target_total / sum;
    std::map<Key, double> out;
    for (const auto& [key, v] : values) out[key] = v * k;
    return out;
}

inline std::map<CellId, double> bin_ads_miles_cell(std::span<const AdsMileageRecord> records,
                                                   int level) {
    std::map<CellId, double> miles;
    std::size_t index = 0;
    for (const AdsMileageRecord& rec : records) {
        CellId cell;
        if (rec.cell) {
            if (rec.cell->level != level)
                throw std::invalid_argument("ads record " + std::to_string(index) +
                                            ": pre-binned cell level " +
                                            std::to_string(rec.cell->level) +
                                            " does not match requested level " +
                                            std::to_string(level));
            cell = *rec.cell;
        } else if (rec.location) {
            cell = cell_from_point(*rec.location, level);
        } else {
            throw std::invalid_argument("ads record " + std::to_string(index) +
                                        ": neither location nor cell_id");
        }
        miles[cell] += rec.miles;
        ++index;
    }
    return miles;
}

inline std::array<double, kNumTimeWindows> bin_ads_miles_window(
    std::span<const AdsMileageRecord> records) {
    std::array<double, kNumTimeWindows> miles{};
    std::size_t index = 0;
    for (const AdsMileageRecord& rec : records) {
        if (!rec.recorded_at)
            throw std::invalid_argument("ads record " + std::to_string(index) +
                                        ": missing recorded_at for time-of-day binning");
        miles[static_cast<std::size_t>(time_window(*rec.recorded_at))] += rec.miles;
        ++index;
    }
    return miles;
}

// Joins human and ADS mileage on the slice key. Slices with human VMT are
// retained (ADS miles defaulting to 0); ADS miles in slices without human
// VMT are excluded and accumulated, mirroring the treatment of cells that
// lack road-level VMT coverage.
inline ExposureTable join_exposure(const std::map<SliceKey, double>& human,
                                   const std::map<SliceKey, double>& ads, Dimension dim) {
    ExposureTable table;
    table.dim = dim;
    for (const auto& [key, vmt] : human) {
        if (dimension_of(key) != dim)
            throw std::invalid_argument("join_exposure: human slice on the wrong dimension");
        if (!(vmt >= 0.0)) throw std::invalid_argument("join_exposure: negative human VMT");
        if (vmt <= 0.0) continue;
        table.rows[key] = ExposureRow{vmt, 0.0};
        table.human_total += vmt;
    }
    for (const auto& [key, miles] : ads) {
        if (dimension_of(key) != dim)
            throw std::invalid_argument("join_exposure: ads slice on the wrong dimension");
        if (!(miles >= 0.0)) throw std::invalid_argument("join_exposure: negative ads miles");
        const auto it = table.rows.find(key);
        if (it == table.rows.end()) {
            table.excluded_ads_miles += miles;
        } else {
            it->second.ads_miles += miles;
            table.ads_total += miles;
        }
    }
    return table;
}

inline ExposureTable join_exposure_cell(const std::map<CellId, double>& human,
                                        const std::map<CellId, double>& ads) {
    std::map<SliceKey, double> h, a;
    for (const auto& [cell, v] : human) h[SliceKey{cell}] = v;
    for (const auto& [cell, v] : ads) a[SliceKey{cell}] = v;
    return join_exposure(h, a, Dimension::cell);
}

inline ExposureTable join_exposure_window(const std::array<double, kNumTimeWindows>& human,
                                          const std::array<double, kNumTimeWindows>& ads) {
    std::map<SliceKey, double> h, a;
    for (std::size_t k = 0; k < kNumTimeWindows; ++k) {
        h[SliceKey{kAllTimeWindows[k]}] = human[k];
        a[SliceKey{kAllTimeWindows[k]}] = ads[k];
    }
    return join_exposure(h, a, Dimension::window);
}

inline void write_exposure_csv(const std::filesystem::path& path, const ExposureTable& table) {
    csv::Writer out(path);
    out.comment("excluded_ads_miles: " + csv::format_double(table.excluded_ads_miles));
    out.row({"slice", "human_vmt", "ads_miles", "f_h", "f_w"});
    for (const auto& [key, row] : table.rows) {
        out.row({slice_token(key), csv::format_double(row.human_vmt),
                 csv::format_double(row.ads_miles), csv::format_double(table.human_share(key)),
                 csv::format_double(table.ads_share(key))});
    }
}

}  // namespace dynbench
