#pragma once

// Synthetic-county generator: a rectangular block of adjacent grid cells
// with chosen per-slice crash rates, human VMT, and an ADS mileage profile
// (flat or staged expansion). Used to validate the estimators against a
// closed-form population multiplier.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynbench/geojson.hpp"
#include "dynbench/records.hpp"

namespace dynbench {

struct SynthStage {
    std::vector<int> slices;
    double miles = 0.0;
    std::string fleet_tag;
};

struct SynthSpec {
    int n_slices = 0;
    GeoPoint anchor{37.76, -122.44};
    int level = 13;
    int grid_width = 0;  // 0: square-ish block
    std::vector<double> rates;      // crashes per mile, per slice
    std::vector<double> human_vmt;  // miles, per slice
    std::vector<double> ads_miles;  // per slice; empty when staged
    std::vector<SynthStage> stages;
    double injury_fraction = 0.0;
    int ads_records_total = 0;  // 0: 10 records per slice
    std::uint64_t seed = 1;

    void validate() const {
        if (n_slices < 1) throw std::invalid_argument("synth: n_slices must be >= 1");
        if (static_cast<int>(rates.size()) != n_slices ||
            static_cast<int>(human_vmt.size()) != n_slices)
            throw std::invalid_argument("synth: rates/human_vmt must have n_slices entries");
        bool any_human = false;
        for (int s = 0; s < n_slices; ++s) {
            if (!(rates[static_cast<std::size_t>(s)] >= 0.0) ||
                !(human_vmt[static_cast<std::size_t>(s)] >= 0.0))
                throw std::invalid_argument("synth: rates and human_vmt must be >= 0");
            any_human = any_human || human_vmt[static_cast<std::size_t>(s)] > 0.0;
        }
        if (!any_human) throw std::invalid_argument("synth: need a slice with positive human VMT");
        if (ads_miles.empty() == stages.empty())
            throw std::invalid_argument("synth: provide exactly one of ads_miles or stages");
        if (!ads_miles.empty() && static_cast<int>(ads_miles.size()) != n_slices)
            throw std::invalid_argument("synth: ads_miles must have n_slices entries");
        for (const SynthStage& stage : stages) {
            if (stage.slices.empty() || !(stage.miles >= 0.0))
                throw std::invalid_argument("synth: malformed stage");
            for (int s : stage.slices)
                if (s < 0 || s >= n_slices)
                    throw std::invalid_argument("synth: stage slice index out of range");
        }
        if (!(injury_fraction >= 0.0 && injury_fraction <= 1.0))
            throw std::invalid_argument("synth: injury_fraction must be in [0, 1]");
    }

    static SynthSpec from_json_file(const std::filesystem::path& path);
};

inline std::vector<double> per_slice_ads_miles(const SynthSpec& spec) {
    if (!spec.ads_miles.empty()) return spec.ads_miles;
    std::vector<double> totals(static_cast<std::size_t>(spec.n_slices), 0.0);
    for (const SynthStage& stage : spec.stages) {
        const double each = stage.miles / static_cast<double>(stage.slices.size());
        for (int s : stage.slices) totals[static_cast<std::size_t>(s)] += each;
    }
    return totals;
}

// The grid cells backing each slice: a block of adjacent cells at the
// spec's level, anchored on the spec's anchor point, row-major.
inline std::vector<CellId> synth_slice_cells(const SynthSpec& spec) {
    const CellId anchor_cell = cell_from_point(spec.anchor, spec.level);
    const FaceIJ anchor_ij = cell_to_face_ij(anchor_cell);
    const int width = spec.grid_width > 0
                          ? spec.grid_width
                          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.n_slices))));
    const std::uint64_t n = 1ull << spec.level;
    std::vector<CellId> cells;
    cells.reserve(static_cast<std::size_t>(spec.n_slices));
    for (int s = 0; s < spec.n_slices; ++s) {
        const std::uint64_t i = anchor_ij.i + static_cast<std::uint64_t>(s % width);
        const std::uint64_t j = anchor_ij.j + static_cast<std::uint64_t>(s / width);
        if (i >= n || j >= n)
            throw std::invalid_argument("synth: slice block exceeds the cube face; move the anchor");
        cells.push_back(cell_from_face_ij(anchor_ij.face, static_cast<std::uint32_t>(i),
                                          static_cast<std::uint32_t>(j), spec.level));
    }
    return cells;
}

// Population multiplier implied by the spec: the ADS-share-weighted mean of
// slice rates over the human-share-weighted mean. Slices without human VMT
// are excluded (their ADS miles would be excluded by the exposure join).
inline double oracle_multiplier(const SynthSpec& spec) {
    spec.validate();
    const std::vector<double> ads = per_slice_ads_miles(spec);
    double human_total = 0.0, ads_total = 0.0;
    for (int s = 0; s < spec.n_slices; ++s) {
        const auto k = static_cast<std::size_t>(s);
        if (spec.human_vmt[k] <= 0.0) continue;
        human_total += spec.human_vmt[k];
        ads_total += ads[k];
    }
    if (!(ads_total > 0.0)) throw std::invalid_argument("oracle_multiplier: no retained ADS miles");
    double dynamic = 0.0, unadjusted = 0.0;
    for (int s = 0; s < spec.n_slices; ++s) {
        const auto k = static_cast<std::size_t>(s);
        if (spec.human_vmt[k] <= 0.0) continue;
        dynamic += (ads[k] / ads_total) * spec.rates[k];
        unadjusted += (spec.human_vmt[k] / human_total) * spec.rates[k];
    }
    if (!(unadjusted > 0.0)) throw std::invalid_argument("oracle_multiplier: zero unadjusted rate");
    return dynamic / unadjusted;
}

struct SynthOutput {
    std::vector<CrashRecord> crashes;
    std::vector<RoadSegment> segments;
    std::vector<AdsMileageRecord> ads;
    std::vector<CellId> slice_cells;
};

// Crash counts are Poisson(rate * human_vmt) per slice; crash points and
// ADS record points are placed uniformly inside the slice's cell; ADS
// records are emitted in stage order with increasing timestamps.
inline SynthOutput generate(const SynthSpec& spec) {
    spec.validate();
    SynthOutput out;
    out.slice_cells = synth_slice_cells(spec);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Interior offsets keep sampled points clear of shared cell edges.
    const auto interior = [&] { return 0.01 + 0.98 * unit(rng); };

    const std::int64_t year_start = CivilDateTime{2022, 1, 1, 0, 0, 0}.to_seconds();
    std::int64_t crash_counter = 0;
    for (int s = 0; s < spec.n_slices; ++s) {
        const auto k = static_cast<std::size_t>(s);
        const CellId cell = out.slice_cells[k];

        if (spec.human_vmt[k] > 0.0) {
            RoadSegment seg;
            seg.geometry.points = {point_in_cell(cell, 0.5, 0.3), point_in_cell(cell, 0.5, 0.7)};
            const double length_miles = seg.geometry.length_m() / kMetersPerMile;
            seg.aadt = spec.human_vmt[k] / length_miles;
            seg.functional_class = "synthetic";
            seg.is_surface_street = true;
            out.segments.push_back(std::move(seg));
        }

        const double mean = spec.rates[k] * spec.human_vmt[k];
        std::int64_t count = 0;
        if (mean > 0.0) {
            std::poisson_distribution<std::int64_t> poisson(mean);
            count = poisson(rng);
        }
        for (std::int64_t c = 0; c < count; ++c) {
            CrashRecord rec;
            rec.id = "c" + std::to_string(++crash_counter);
            rec.location = point_in_cell(cell, interior(), interior());
            rec.occurred_at = CivilDateTime::from_seconds(
                year_start + static_cast<std::int64_t>(unit(rng) * 365.0 * 86400.0));
            rec.source = CrashSource::canonical;
            rec.severity.police_reported = true;
            if (spec.injury_fraction > 0.0 && unit(rng) < spec.injury_fraction)
                rec.severity.any_injury = true;
            rec.severity = rec.severity.repaired();
            out.crashes.push_back(std::move(rec));
        }
    }

    // ADS mileage records: flat profiles emit per-slice chunks; staged
    // profiles emit stages in order so timestamps trace the expansion.
    const std::vector<double> totals = per_slice_ads_miles(spec);
    double grand_total = 0.0;
    for (double m : totals) grand_total += m;
    const int target_records =
        spec.ads_records_total > 0 ? spec.ads_records_total : 10 * spec.n_slices;
    const std::int64_t ads_start = CivilDateTime{2024, 1, 1, 0, 0, 0}.to_seconds();
    std::int64_t record_counter = 0;
    const auto emit = [&](int slice, double miles, int records, const std::string& fleet) {
        if (!(miles > 0.0) || records < 1) return;
        const double each = miles / static_cast<double>(records);
        for (int r = 0; r < records; ++r) {
            AdsMileageRecord rec;
            rec.location = point_in_cell(out.slice_cells[static_cast<std::size_t>(slice)],
                                         interior(), interior());
            rec.miles = each;
            rec.recorded_at = CivilDateTime::from_seconds(ads_start + 60 * record_counter++);
            rec.fleet_tag = fleet;
            out.ads.push_back(std::move(rec));
        }
    };
    if (!spec.ads_miles.empty()) {
        for (int s = 0; s < spec.n_slices; ++s) {
            const double miles = spec.ads_miles[static_cast<std::size_t>(s)];
            if (!(miles > 0.0)) continue;
            const int records = std::max(
                1, static_cast<int>(std::llround(target_records * miles / grand_total)));
            emit(s, miles, records, "");
        }
    } else {
        for (const SynthStage& stage : spec.stages) {
            const double per_slice = stage.miles / static_cast<double>(stage.slices.size());
            const int records = std::max(
                1, static_cast<int>(std::llround(target_records * per_slice / grand_total)));
            for (int s : stage.slices) emit(s, per_slice, records, stage.fleet_tag);
        }
    }
    return out;
}

inline SynthSpec SynthSpec::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid synth spec " + path.string() + ": " + e.what());
    }
    SynthSpec spec;
    try {
        spec.n_slices = doc.at("n_slices").get<int>();
        if (doc.contains("anchor"))
            spec.anchor = GeoPoint(doc.at("anchor").at("lat").get<double>(),
                                   doc.at("anchor").at("lng").get<double>());
        spec.level = doc.value("level", 13);
        spec.grid_width = doc.value("grid_width", 0);
        spec.rates = doc.at("rates").get<std::vector<double>>();
        spec.human_vmt = doc.at("human_vmt").get<std::vector<double>>();
        if (doc.contains("ads_miles"))
            spec.ads_miles = doc.at("ads_miles").get<std::vector<double>>();
        if (doc.contains("stages")) {
            for (const auto& item : doc.at("stages")) {
                SynthStage stage;
                stage.slices = item.at("slices").get<std::vector<int>>();
                stage.miles = item.at("miles").get<double>();
                stage.fleet_tag = item.value("fleet_tag", "");
                spec.stages.push_back(std::move(stage));
            }
        }
        spec.injury_fraction = doc.value("injury_fraction", 0.0);
        spec.ads_records_total = doc.value("ads_records_total", 0);
        spec.seed = doc.value("seed", std::uint64_t{1});
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid synth spec " + path.string() + ": " + e.what());
    }
    spec.validate();
    return spec;
}

}  // namespace dynbench
