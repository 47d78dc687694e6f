#pragma once

// Poisson bootstrap confidence intervals. Each replicate reweights every
// crash event by an independent Poisson(1) draw; exposure mileages are
// never resampled. Replicate streams are keyed by (seed, replicate, event),
// so intervals are deterministic for a given seed and invariant to how
// replicates are distributed across threads.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dynbench/benchmark.hpp"
#include "dynbench/rng.hpp"

namespace dynbench {

struct BootstrapConfig {
    int n_replicates = 1000;
    double alpha = 0.10;
    std::uint64_t seed = 0;
    int threads = 1;
};

inline void validate(const BootstrapConfig& config) {
    if (config.n_replicates < 1)
        throw std::invalid_argument("bootstrap: n_replicates must be >= 1");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw std::invalid_argument("bootstrap: alpha must be in (0, 1)");
    if (config.threads < 1) throw std::invalid_argument("bootstrap: threads must be >= 1");
}

enum class Statistic { unadjusted, dynamic, multiplier };

inline std::string_view statistic_name(Statistic s) {
    switch (s) {
        case Statistic::unadjusted: return "unadjusted";
        case Statistic::dynamic: return "dynamic";
        case Statistic::multiplier: return "multiplier";
    }
    return "";
}

inline std::optional<Statistic> statistic_from_name(std::string_view name) {
    if (name == "unadjusted") return Statistic::unadjusted;
    if (name == "dynamic") return Statistic::dynamic;
    if (name == "multiplier") return Statistic::multiplier;
    return std::nullopt;
}

struct IntervalEstimate {
    double point = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int replicates_used = 0;
    int degenerate = 0;
};

namespace detail {

// Linear interpolation between order statistics (values sorted ascending).
inline double quantile_linear(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::logic_error("quantile of empty sample");
    if (sorted.size() == 1) return sorted.front();
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct WeightedStat {
    bool degenerate = false;
    double value = 0.0;
};

// Evaluates the statistic on per-slice weighted counts. The multiplier
// shares one set of weights between numerator and denominator.
inline WeightedStat evaluate(std::span<const SliceStat> stats, std::span<const double> weighted,
                             Statistic statistic, SeverityLevel severity,
                             const Underreporting& underreporting, double human_total,
                             double ads_total) {
    double crashes = 0.0;
    double dynamic_sum = 0.0;
    for (std::size_t s = 0; s < stats.size(); ++s) {
        const double adjusted = apply_underreporting(weighted[s], severity, underreporting);
        crashes += adjusted;
        if (stats[s].ads_miles > 0.0 && stats[s].human_vmt > 0.0)
            dynamic_sum += stats[s].ads_miles * (adjusted / stats[s].human_vmt);
    }
    const double unadjusted = crashes / human_total;
    const double dynamic = dynamic_sum / ads_total;
    switch (statistic) {
        case Statistic::unadjusted: return {false, unadjusted};
        case Statistic::dynamic: return {false, dynamic};
        case Statistic::multiplier:
            if (!(unadjusted > 0.0)) return {true, 0.0};
            return {false, dynamic / unadjusted};
    }
    return {true, 0.0};
}

template <typename Fn>
void parallel_chunks(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        fn(0, n);
        return;
    }
    const int workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<std::int64_t>(n) * w / workers);
        const int end = static_cast<int>(static_cast<std::int64_t>(n) * (w + 1) / workers);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace detail

// Bootstrap CI for a pipeline statistic over crashes already assigned to the
// slices of an exposure table. lo/hi are the empirical alpha/2 and
// 1 - alpha/2 quantiles of the replicate distribution. Replicates on which
// the statistic is undefined are excluded and counted; more than 1% of them
// is an error.
inline IntervalEstimate poisson_bootstrap(const SliceAssignment& assignment, Statistic statistic,
                                          SeverityLevel severity,
                                          const Underreporting& underreporting,
                                          const BootstrapConfig& config) {
    validate(config);
    const std::span<const SliceStat> stats(assignment.stats);
    double human_total = 0.0, ads_total = 0.0;
    for (const SliceStat& s : stats) {
        human_total += s.human_vmt;
        ads_total += s.ads_miles;
    }
    if (!(human_total > 0.0)) throw std::invalid_argument("bootstrap: zero human exposure");
    if (!(ads_total > 0.0) && statistic != Statistic::unadjusted)
        throw std::invalid_argument("bootstrap: zero ADS mileage");

    IntervalEstimate estimate;
    {
        // Point estimate from unit weights.
        std::vector<double> unit(stats.size(), 0.0);
        for (const std::uint32_t s : assignment.event_slice) unit[s] += 1.0;
        const auto point = detail::evaluate(stats, unit, statistic, severity, underreporting,
                                            human_total, ads_total);
        if (point.degenerate)
            throw std::invalid_argument("bootstrap: statistic undefined on the point data");
        estimate.point = point.value;
    }

    const int n = config.n_replicates;
    std::vector<double> values(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> degenerate(static_cast<std::size_t>(n), 0);
    detail::parallel_chunks(n, config.threads, [&](int begin, int end) {
        std::vector<double> weighted(stats.size());
        for (int r = begin; r < end; ++r) {
            std::fill(weighted.begin(), weighted.end(), 0.0);
            for (std::size_t e = 0; e < assignment.event_slice.size(); ++e) {
                const double u = counter_uniform(config.seed, static_cast<std::uint64_t>(r), e);
                weighted[assignment.event_slice[e]] += poisson_one(u);
            }
            const auto rep = detail::evaluate(stats, weighted, statistic, severity, underreporting,
                                              human_total, ads_total);
            values[static_cast<std::size_t>(r)] = rep.value;
            degenerate[static_cast<std::size_t>(r)] = rep.degenerate ? 1 : 0;
        }
    });

    std::vector<double> kept;
    kept.reserve(values.size());
    for (std::size_t r = 0; r < values.size(); ++r)
        if (!degenerate[r]) kept.push_back(values[r]);
    estimate.degenerate = n - static_cast<int>(kept.size());
    estimate.replicates_used = static_cast<int>(kept.size());
    if (estimate.degenerate > 0 &&
        static_cast<double>(estimate.degenerate) > 0.01 * static_cast<double>(n))
        throw std::runtime_error("bootstrap: more than 1% of replicates degenerate (" +
                                 std::to_string(estimate.degenerate) + " of " + std::to_string(n) +
                                 ")");
    std::sort(kept.begin(), kept.end());
    estimate.lo = detail::quantile_linear(kept, config.alpha / 2.0);
    estimate.hi = detail::quantile_linear(kept, 1.0 - config.alpha / 2.0);
    return estimate;
}

}  // namespace dynbench
