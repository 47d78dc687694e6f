#pragma once

// Road segment ingestion: GeoJSON FeatureCollections of LineStrings, or CSV
// with a WKT LINESTRING geometry column.

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynbench/csv.hpp"
#include "dynbench/geo.hpp"

namespace dynbench {

struct RoadSegment {
    Polyline geometry;
    double aadt = 0.0;  // vehicles/day
    std::string functional_class;
    bool is_surface_street = true;
};

namespace detail {

inline void check_aadt(double aadt, const std::string& where) {
    if (!(aadt >= 0.0) || !std::isfinite(aadt))
        throw std::runtime_error(where + ": aadt must be finite and non-negative");
}

}  // namespace detail

inline std::vector<RoadSegment> load_segments_geojson(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid GeoJSON " + path.string() + ": " + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection")
        throw std::runtime_error(path.string() + ": expected a FeatureCollection");

    std::vector<RoadSegment> segments;
    std::size_t index = 0;
    for (const auto& feature : doc.at("features")) {
        const std::string where = path.string() + ": feature " + std::to_string(index++);
        const auto& geom = feature.at("geometry");
        if (geom.value("type", "") != "LineString")
            throw std::runtime_error(where + ": only LineString geometries are supported");
        RoadSegment seg;
        for (const auto& coord : geom.at("coordinates")) {
            if (!coord.is_array() || coord.size() < 2)
                throw std::runtime_error(where + ": malformed coordinate pair");
            // GeoJSON order is [lng, lat].
            try {
                seg.geometry.points.emplace_back(coord[1].get<double>(), coord[0].get<double>());
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error(where + ": " + e.what());
            }
        }
        if (seg.geometry.points.size() < 2)
            throw std::runtime_error(where + ": LineString needs at least 2 points");
        const auto& props = feature.at("properties");
        if (!props.contains("aadt") || !props.at("aadt").is_number())
            throw std::runtime_error(where + ": missing numeric 'aadt' property");
        seg.aadt = props.at("aadt").get<double>();
        detail::check_aadt(seg.aadt, where);
        seg.functional_class = props.value("functional_class", "");
        seg.is_surface_street = props.value("is_surface_street", true);
        segments.push_back(std::move(seg));
    }
    return segments;
}

namespace detail {

inline Polyline parse_wkt_linestring(const std::string& wkt, const std::filesystem::path& path,
                                     std::size_t line_no) {
    const auto fail = [&](const std::string& msg) {
        throw ParseError(path, line_no, "WKT: " + msg);
    };
    std::size_t pos = wkt.find_first_not_of(' ');
    if (pos == std::string::npos || wkt.compare(pos, 10, "LINESTRING") != 0)
        fail("expected LINESTRING");
    pos = wkt.find('(', pos);
    const std::size_t close = wkt.rfind(')');
    if (pos == std::string::npos || close == std::string::npos || close <= pos)
        fail("missing coordinate list");
    Polyline line;
    std::size_t start = pos + 1;
    while (start < close) {
        std::size_t end = wkt.find(',', start);
        if (end == std::string::npos || end > close) end = close;
        const std::string pair = wkt.substr(start, end - start);
        double lng = 0.0, lat = 0.0;  // WKT order is x y = lng lat
        if (std::sscanf(pair.c_str(), "%lf %lf", &lng, &lat) != 2)
            fail("malformed coordinate '" + pair + "'");
        try {
            line.points.emplace_back(lat, lng);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        start = end + 1;
    }
    if (line.points.size() < 2) fail("LINESTRING needs at least 2 points");
    return line;
}

}  // namespace detail

inline std::vector<RoadSegment> load_segments_csv(const std::filesystem::path& path) {
    const csv::Table table(path);
    const std::size_t geom_col = table.require_column("geometry");
    const std::size_t aadt_col = table.require_column("aadt");
    const auto class_col = table.find_column("functional_class");
    const auto surface_col = table.find_column("is_surface_street");

    std::vector<RoadSegment> segments;
    segments.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        RoadSegment seg;
        seg.geometry = detail::parse_wkt_linestring(table.field(r, geom_col), path, table.line_of(r));
        seg.aadt = table.number(r, aadt_col);
        if (!(seg.aadt >= 0.0))
            throw ParseError(path, table.line_of(r), "aadt must be >= 0");
        if (class_col) seg.functional_class = table.field(r, *class_col);
        seg.is_surface_street =
            !surface_col || table.field(r, *surface_col).empty() || table.boolean(r, *surface_col);
        segments.push_back(std::move(seg));
    }
    return segments;
}

inline void write_segments_geojson(const std::filesystem::path& path,
                                   std::span<const RoadSegment> segments) {
    nlohmann::ordered_json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = nlohmann::ordered_json::array();
    for (const RoadSegment& seg : segments) {
        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["geometry"]["type"] = "LineString";
        auto& coords = feature["geometry"]["coordinates"];
        coords = nlohmann::ordered_json::array();
        for (const GeoPoint& p : seg.geometry.points) coords.push_back({p.lng, p.lat});
        feature["properties"]["aadt"] = seg.aadt;
        feature["properties"]["functional_class"] = seg.functional_class;
        feature["properties"]["is_surface_street"] = seg.is_surface_street;
        doc["features"].push_back(std::move(feature));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    out << doc.dump() << "\n";
}

}  // namespace dynbench
