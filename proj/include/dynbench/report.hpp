#pragma once

// Deterministic JSON report rendering: fixed key order, pinned float
// formatting (6 significant digits for rates and mileages, 3 for
// multipliers), and input digests, so identical runs produce identical
// bytes.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynbench/benchmark.hpp"
#include "dynbench/bootstrap.hpp"

namespace dynbench {

// printf %g semantics: at most `digits` significant digits, trailing zeros
// stripped.
inline std::string format_sig(double value, int digits) {
    if (!std::isfinite(value)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

// Insertion-order JSON emitter (compact, no whitespace).
class JsonWriter {
   public:
    JsonWriter& begin_object() { return open('{'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('['); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(std::string_view name) {
        comma();
        append_string(name);
        out_ += ':';
        pending_value_ = true;
        return *this;
    }

    JsonWriter& string(std::string_view value) {
        comma();
        append_string(value);
        return *this;
    }
    JsonWriter& number_raw(std::string_view token) {
        comma();
        out_ += token;
        return *this;
    }
    JsonWriter& number_sig(double value, int digits) { return number_raw(format_sig(value, digits)); }
    JsonWriter& integer(std::int64_t value) { return number_raw(std::to_string(value)); }
    JsonWriter& boolean(bool value) { return number_raw(value ? "true" : "false"); }
    JsonWriter& null() { return number_raw("null"); }

    const std::string& str() const { return out_; }

   private:
    JsonWriter& open(char c) {
        comma();
        out_ += c;
        depth_first_.push_back(true);
        return *this;
    }
    JsonWriter& close(char c) {
        out_ += c;
        depth_first_.pop_back();
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!depth_first_.empty()) {
            if (!depth_first_.back()) out_ += ',';
            depth_first_.back() = false;
        }
    }
    void append_string(std::string_view value) {
        out_ += '"';
        for (const char c : value) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> depth_first_;
    bool pending_value_ = false;
};

// Everything that shapes a run's numbers; echoed into every report.
struct RunConfig {
    int level = 13;
    double step_m = 10.0;
    std::vector<SeverityLevel> severities = {SeverityLevel::police_reported};
    Underreporting underreporting;
    BucketWeighting bucket_mode = BucketWeighting::human_vmt;
    BootstrapConfig bootstrap;
    double exclusion_warn_threshold = 0.01;
    std::optional<double> calibration_target;
    std::map<std::string, std::string> input_digests;

    PipelineConfig pipeline() const {
        return PipelineConfig{level, step_m, underreporting, calibration_target};
    }
};

inline void write_config_echo(JsonWriter& w, const RunConfig& config) {
    w.begin_object();
    w.key("level").integer(config.level);
    w.key("step_m").number_raw(csv::format_double(config.step_m));
    w.key("severity_levels").begin_array();
    for (SeverityLevel level : config.severities) w.string(severity_name(level));
    w.end_array();
    w.key("underreporting").begin_object();
    w.key("factor").number_raw(csv::format_double(config.underreporting.factor));
    w.key("formula").string(underreporting_formula_name(config.underreporting.formula));
    w.end_object();
    w.key("bucket_mode").string(bucket_weighting_name(config.bucket_mode));
    w.key("bootstrap").begin_object();
    w.key("n").integer(config.bootstrap.n_replicates);
    w.key("alpha").number_raw(csv::format_double(config.bootstrap.alpha));
    w.key("seed").integer(static_cast<std::int64_t>(config.bootstrap.seed));
    w.key("quantile_rule").string("linear");
    w.end_object();
    w.key("exclusion_warn_threshold").number_raw(csv::format_double(config.exclusion_warn_threshold));
    w.key("calibration_target");
    if (config.calibration_target)
        w.number_raw(csv::format_double(*config.calibration_target));
    else
        w.null();
    w.key("input_digests").begin_object();
    for (const auto& [name, digest] : config.input_digests) w.key(name).string(digest);
    w.end_object();
    w.end_object();
}

inline std::string render_benchmark_report(const BenchmarkReport& report,
                                           const RunConfig& config) {
    JsonWriter w;
    w.begin_object();
    w.key("severity").string(severity_name(report.severity));
    w.key("unadjusted_ipmm").number_sig(report.unadjusted_ipmm, 6);
    w.key("dynamic_ipmm").number_sig(report.dynamic_ipmm, 6);
    w.key("multiplier").number_sig(report.multiplier, 3);
    w.key("ci");
    if (report.ci) {
        w.begin_object();
        w.key("lo").number_sig(report.ci->lo, 3);
        w.key("hi").number_sig(report.ci->hi, 3);
        w.end_object();
    } else {
        w.null();
    }
    w.key("total_crashes").number_sig(report.total_crashes, 6);
    w.key("m_h_miles").number_sig(report.m_h_miles, 6);
    w.key("m_w_miles").number_sig(report.m_w_miles, 6);
    w.key("excluded_ads_fraction").number_sig(report.excluded_ads_fraction, 6);
    w.key("slice_count").integer(report.slice_count);
    w.key("config_echo");
    write_config_echo(w, config);
    w.end_object();
    return w.str() + "\n";
}

inline std::string render_interval_estimate(Statistic statistic, const IntervalEstimate& estimate,
                                            const RunConfig& config) {
    const int digits = statistic == Statistic::multiplier ? 3 : 6;
    JsonWriter w;
    w.begin_object();
    w.key("statistic").string(statistic_name(statistic));
    w.key("point").number_sig(estimate.point, digits);
    w.key("ci").begin_object();
    w.key("lo").number_sig(estimate.lo, digits);
    w.key("hi").number_sig(estimate.hi, digits);
    w.end_object();
    w.key("replicates_used").integer(estimate.replicates_used);
    w.key("degenerate").integer(estimate.degenerate);
    w.key("quantile_rule").string("linear");
    w.key("config_echo");
    write_config_echo(w, config);
    w.end_object();
    return w.str() + "\n";
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    out << text;
}

}  // namespace dynbench
