#pragma once

// Benchmark estimators: slice-level crash rates, the exposure-reweighted
// (dynamic) benchmark in both its weighted-average and share-ratio forms,
// correction multipliers, quantile buckets, milestone series, fleet
// subsets, and heatmap rows.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "dynbench/exposure.hpp"
#include "dynbench/severity.hpp"

namespace dynbench {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Per-slice crash statistics. `crashes` is the underreporting-adjusted
// count; rate = crashes / human_vmt.
struct SliceStat {
    SliceKey key;
    double crashes = 0.0;
    std::int64_t raw_crashes = 0;
    double human_vmt = 0.0;
    double ads_miles = 0.0;
    double rate = 0.0;
};

// Crashes indexed against a table's retained slices: one SliceStat per
// retained slice (zero-crash slices included) plus the per-event slice
// assignment the bootstrap resamples over. Events matching the severity but
// falling outside the retained slice universe are counted, not rated.
struct SliceAssignment {
    std::vector<SliceStat> stats;
    std::vector<std::uint32_t> event_slice;
    std::int64_t matched_events = 0;
    std::int64_t unassigned_events = 0;
};

inline SliceAssignment slice_rates(std::span<const CrashRecord> crashes,
                                   const ExposureTable& table, SeverityLevel severity,
                                   const Underreporting& underreporting = {}, int level = 13) {
    SliceAssignment out;
    out.stats.reserve(table.rows.size());
    std::map<SliceKey, std::uint32_t> slice_index;
    for (const auto& [key, row] : table.rows) {
        slice_index.emplace(key, static_cast<std::uint32_t>(out.stats.size()));
        SliceStat stat;
        stat.key = key;
        stat.human_vmt = row.human_vmt;
        stat.ads_miles = row.ads_miles;
        out.stats.push_back(stat);
    }

    for (const CrashRecord& rec : crashes) {
        if (!rec.severity.matches(severity)) continue;
        ++out.matched_events;
        std::optional<SliceKey> key;
        if (table.dim == Dimension::cell) {
            if (rec.location) key = SliceKey{cell_from_point(*rec.location, level)};
        } else {
            if (rec.occurred_at) key = SliceKey{time_window(*rec.occurred_at)};
        }
        const auto it = key ? slice_index.find(*key) : slice_index.end();
        if (it == slice_index.end()) {
            ++out.unassigned_events;
            continue;
        }
        out.stats[it->second].raw_crashes += 1;
        out.event_slice.push_back(it->second);
    }

    for (SliceStat& stat : out.stats) {
        stat.crashes =
            apply_underreporting(static_cast<double>(stat.raw_crashes), severity, underreporting);
        stat.rate = stat.human_vmt > 0.0 ? stat.crashes / stat.human_vmt : 0.0;
    }
    return out;
}

// Pooled crash rate over the retained slice universe.
inline double unadjusted_rate(std::span<const SliceStat> stats) {
    double crashes = 0.0, vmt = 0.0;
    for (const SliceStat& s : stats) {
        crashes += s.crashes;
        vmt += s.human_vmt;
    }
    if (!(vmt > 0.0)) throw std::invalid_argument("unadjusted_rate: zero human exposure");
    return crashes / vmt;
}

// ADS-mileage-weighted average of slice rates. Bounded by the min and max
// slice rate over slices carrying ADS miles.
inline double dynamic_rate(std::span<const SliceStat> stats) {
    double weighted = 0.0, ads = 0.0;
    for (const SliceStat& s : stats) {
        if (s.ads_miles <= 0.0) continue;
        if (!(s.human_vmt > 0.0))
            throw std::invalid_argument("dynamic_rate: slice with ADS miles but no human VMT");
        weighted += s.ads_miles * s.rate;
        ads += s.ads_miles;
    }
    if (!(ads > 0.0)) throw std::invalid_argument("dynamic_rate: zero ADS mileage");
    return weighted / ads;
}

// Share-ratio form: each slice contributes its share of the pooled crash
// count weighted by the ratio of ADS to human mileage propensity. Agrees
// with dynamic_rate algebraically.
inline double dynamic_rate_eq5(std::span<const SliceStat> stats) {
    double human_total = 0.0, ads_total = 0.0;
    for (const SliceStat& s : stats) {
        human_total += s.human_vmt;
        ads_total += s.ads_miles;
    }
    if (!(human_total > 0.0)) throw std::invalid_argument("dynamic_rate_eq5: zero human exposure");
    if (!(ads_total > 0.0)) throw std::invalid_argument("dynamic_rate_eq5: zero ADS mileage");
    double total = 0.0;
    for (const SliceStat& s : stats) {
        if (s.ads_miles <= 0.0) continue;
        const double human_share = s.human_vmt / human_total;
        if (!(human_share > 0.0))
            throw std::invalid_argument("dynamic_rate_eq5: contributing slice with zero human share");
        const double ads_share = s.ads_miles / ads_total;
        total += (s.crashes / human_total) * (ads_share / human_share);
    }
    return total;
}

inline double multiplier(double dynamic, double unadjusted) {
    if (!(unadjusted > 0.0)) throw std::invalid_argument("multiplier: zero unadjusted rate");
    return dynamic / unadjusted;
}

// Multiplier straight from ADS mileage shares and per-slice relative rates.
inline double multiplier_from_shares(std::span<const double> ads_shares,
                                     std::span<const double> relative_rates) {
    if (ads_shares.size() != relative_rates.size())
        throw std::invalid_argument("multiplier_from_shares: size mismatch");
    double share_sum = 0.0, result = 0.0;
    for (std::size_t k = 0; k < ads_shares.size(); ++k) {
        if (!(ads_shares[k] >= 0.0) || !(relative_rates[k] >= 0.0))
            throw std::invalid_argument("multiplier_from_shares: negative input");
        share_sum += ads_shares[k];
        result += ads_shares[k] * relative_rates[k];
    }
    if (std::abs(share_sum - 1.0) > 1e-6)
        throw std::invalid_argument("multiplier_from_shares: shares must sum to 1");
    return result;
}

struct BenchmarkReport {
    SeverityLevel severity = SeverityLevel::police_reported;
    double unadjusted_ipmm = 0.0;
    double dynamic_ipmm = 0.0;
    double multiplier = 0.0;
    std::optional<Interval> ci;
    double total_crashes = 0.0;  // adjusted count over retained slices
    double m_h_miles = 0.0;
    double m_w_miles = 0.0;
    double excluded_ads_fraction = 0.0;
    std::int64_t slice_count = 0;
};

inline BenchmarkReport summarize(SeverityLevel severity, std::span<const SliceStat> stats,
                                 const ExposureTable& table,
                                 std::optional<Interval> ci = std::nullopt) {
    BenchmarkReport report;
    report.severity = severity;
    const double unadjusted = unadjusted_rate(stats);
    const double dynamic = dynamic_rate(stats);
    report.unadjusted_ipmm = unadjusted * 1e6;
    report.dynamic_ipmm = dynamic * 1e6;
    report.multiplier = multiplier(dynamic, unadjusted);
    report.ci = ci;
    for (const SliceStat& s : stats) report.total_crashes += s.crashes;
    report.m_h_miles = table.human_total;
    report.m_w_miles = table.ads_total;
    report.excluded_ads_fraction = table.excluded_fraction();
    report.slice_count = static_cast<std::int64_t>(stats.size());
    return report;
}

// ---------------------------------------------------------------------------
// Quantile buckets (crash-rate deciles)

enum class BucketWeighting { human_vmt, slice_count };

inline std::string_view bucket_weighting_name(BucketWeighting mode) {
    return mode == BucketWeighting::human_vmt ? "human_vmt" : "slice_count";
}

struct Bucket {
    double rate_lo = 0.0;
    double rate_hi = 0.0;
    double human_share = 0.0;
    double ads_share = 0.0;
    double bucket_rate_ipmm = 0.0;
    std::int64_t slices = 0;
};

struct BucketReport {
    BucketWeighting mode = BucketWeighting::human_vmt;
    std::vector<Bucket> buckets;
};

// Slices sorted by rate (ties broken by slice token) are cut into n buckets
// holding roughly equal human VMT (default) or equal slice counts.
inline BucketReport quantile_buckets(std::span<const SliceStat> stats, int n = 10,
                                     BucketWeighting mode = BucketWeighting::human_vmt) {
    std::vector<const SliceStat*> sorted;
    for (const SliceStat& s : stats)
        if (s.human_vmt > 0.0) sorted.push_back(&s);
    if (static_cast<int>(sorted.size()) < n)
        throw std::invalid_argument("quantile_buckets: fewer slices than buckets");
    std::sort(sorted.begin(), sorted.end(), [](const SliceStat* a, const SliceStat* b) {
        if (a->rate != b->rate) return a->rate < b->rate;
        return slice_token(a->key) < slice_token(b->key);
    });

    double human_total = 0.0, ads_total = 0.0;
    for (const SliceStat* s : sorted) {
        human_total += s->human_vmt;
        ads_total += s->ads_miles;
    }

    BucketReport report;
    report.mode = mode;
    report.buckets.resize(static_cast<std::size_t>(n));
    std::vector<double> crashes(static_cast<std::size_t>(n), 0.0);
    std::vector<double> vmt(static_cast<std::size_t>(n), 0.0);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const SliceStat* s = sorted[k];
        int b;
        if (mode == BucketWeighting::human_vmt) {
            const double mid = cumulative + 0.5 * s->human_vmt;
            b = static_cast<int>(static_cast<double>(n) * mid / human_total);
            cumulative += s->human_vmt;
        } else {
            b = static_cast<int>(k * static_cast<std::size_t>(n) / sorted.size());
        }
        b = std::clamp(b, 0, n - 1);
        Bucket& bucket = report.buckets[static_cast<std::size_t>(b)];
        if (bucket.slices == 0) {
            bucket.rate_lo = s->rate;
            bucket.rate_hi = s->rate;
        } else {
            bucket.rate_lo = std::min(bucket.rate_lo, s->rate);
            bucket.rate_hi = std::max(bucket.rate_hi, s->rate);
        }
        bucket.slices += 1;
        bucket.human_share += s->human_vmt / human_total;
        if (ads_total > 0.0) bucket.ads_share += s->ads_miles / ads_total;
        crashes[static_cast<std::size_t>(b)] += s->crashes;
        vmt[static_cast<std::size_t>(b)] += s->human_vmt;
    }
    for (std::size_t b = 0; b < report.buckets.size(); ++b)
        if (vmt[b] > 0.0) report.buckets[b].bucket_rate_ipmm = crashes[b] / vmt[b] * 1e6;
    return report;
}

// ---------------------------------------------------------------------------
// Full pipeline helpers (shared by the CLI, fleet subsets and milestones)

struct PipelineConfig {
    int level = 13;
    double step_m = 10.0;
    Underreporting underreporting;
    std::optional<double> calibration_target;
};

inline ExposureTable build_cell_table(const std::map<CellId, double>& human_vmt,
                                      std::span<const AdsMileageRecord> ads,
                                      const PipelineConfig& config) {
    const std::map<CellId, double> human = config.calibration_target
                                               ? calibrate(human_vmt, *config.calibration_target)
                                               : human_vmt;
    return join_exposure_cell(human, bin_ads_miles_cell(ads, config.level));
}

inline BenchmarkReport run_benchmark(std::span<const CrashRecord> crashes,
                                     const std::map<CellId, double>& human_vmt,
                                     std::span<const AdsMileageRecord> ads, SeverityLevel severity,
                                     const PipelineConfig& config) {
    const ExposureTable table = build_cell_table(human_vmt, ads, config);
    const SliceAssignment assignment =
        slice_rates(crashes, table, severity, config.underreporting, config.level);
    return summarize(severity, assignment.stats, table);
}

// Same pipeline restricted to the ADS mileage records accepted by the
// filter; the human side is unchanged.
inline BenchmarkReport subset_benchmark(std::span<const CrashRecord> crashes,
                                        const std::map<CellId, double>& human_vmt,
                                        std::span<const AdsMileageRecord> ads,
                                        const std::function<bool(const AdsMileageRecord&)>& filter,
                                        SeverityLevel severity, const PipelineConfig& config) {
    std::vector<AdsMileageRecord> subset;
    for (const AdsMileageRecord& rec : ads)
        if (filter(rec)) subset.push_back(rec);
    double subset_miles = 0.0;
    for (const AdsMileageRecord& rec : subset) subset_miles += rec.miles;
    if (!(subset_miles > 0.0))
        throw std::invalid_argument("subset_benchmark: filter retains no ADS miles");
    return run_benchmark(crashes, human_vmt, subset, severity, config);
}

// ---------------------------------------------------------------------------
// Milestone series

struct MilestonePoint {
    double cumulative_miles = 0.0;
    double multiplier = 0.0;
    std::optional<Interval> ci;
};

// Orders ADS records by timestamp and recomputes the multiplier using only
// the miles accumulated up to each checkpoint; crashes and human exposure
// stay fixed.
inline std::vector<MilestonePoint> milestone_multipliers(
    std::span<const CrashRecord> crashes, const std::map<CellId, double>& human_vmt,
    std::span<const AdsMileageRecord> ads, std::span<const double> checkpoints,
    SeverityLevel severity, const PipelineConfig& config) {
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        if (!(checkpoints[k] > 0.0))
            throw std::invalid_argument("milestone_multipliers: checkpoints must be positive");
        if (k > 0 && !(checkpoints[k] > checkpoints[k - 1]))
            throw std::invalid_argument("milestone_multipliers: checkpoints must be increasing");
    }
    std::vector<std::size_t> order(ads.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (const AdsMileageRecord& rec : ads)
        if (!rec.recorded_at)
            throw std::invalid_argument("milestone_multipliers: ads record missing timestamp");
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ads[a].recorded_at->to_seconds() < ads[b].recorded_at->to_seconds();
    });

    double total = 0.0;
    for (const AdsMileageRecord& rec : ads) total += rec.miles;

    std::vector<MilestonePoint> points;
    points.reserve(checkpoints.size());
    std::vector<AdsMileageRecord> prefix;
    std::size_t next = 0;
    double cumulative = 0.0;
    for (const double checkpoint : checkpoints) {
        if (checkpoint > total * (1.0 + 1e-9))
            throw std::invalid_argument("milestone_multipliers: checkpoint beyond total ADS miles");
        while (next < order.size() &&
               cumulative + ads[order[next]].miles <= checkpoint * (1.0 + 1e-12)) {
            cumulative += ads[order[next]].miles;
            prefix.push_back(ads[order[next]]);
            ++next;
        }
        const BenchmarkReport report = run_benchmark(crashes, human_vmt, prefix, severity, config);
        points.push_back(MilestonePoint{cumulative, report.multiplier, std::nullopt});
    }
    return points;
}

// ---------------------------------------------------------------------------
// Heatmap export

struct HeatmapRow {
    CellId cell;
    GeoPoint center;
    double human_vmt = 0.0;
    double ads_miles = 0.0;
    double human_share = 0.0;
    double ads_share = 0.0;
    double rate_ipmm = 0.0;
};

inline std::vector<HeatmapRow> heatmap_export(std::span<const SliceStat> stats,
                                              const ExposureTable& table) {
    if (table.dim != Dimension::cell)
        throw std::invalid_argument("heatmap_export: spatial table required");
    std::vector<HeatmapRow> rows;
    rows.reserve(stats.size());
    for (const SliceStat& s : stats) {
        HeatmapRow row;
        row.cell = std::get<CellId>(s.key);
        row.center = cell_center(row.cell);
        row.human_vmt = s.human_vmt;
        row.ads_miles = s.ads_miles;
        row.human_share = table.human_total > 0.0 ? s.human_vmt / table.human_total : 0.0;
        row.ads_share = table.ads_total > 0.0 ? s.ads_miles / table.ads_total : 0.0;
        row.rate_ipmm = s.rate * 1e6;
        rows.push_back(row);
    }
    return rows;
}

inline void write_heatmap_csv(const std::filesystem::path& path,
                              std::span<const HeatmapRow> rows) {
    csv::Writer out(path);
    out.row({"cell", "center_lat", "center_lng", "human_vmt", "ads_miles", "f_h", "f_w",
             "rate_ipmm"});
    for (const HeatmapRow& row : rows) {
        out.row({row.cell.token(), csv::format_double(row.center.lat),
                 csv::format_double(row.center.lng), csv::format_double(row.human_vmt),
                 csv::format_double(row.ads_miles), csv::format_double(row.human_share),
                 csv::format_double(row.ads_share), csv::format_double(row.rate_ipmm)});
    }
}

}  // namespace dynbench
