#pragma once

// Cube-face quadtree geo-indexing: maps lat/lng points onto hierarchical
// grid cells (quadratic area-equalizing projection, levels 0-30) and
// allocates polyline lengths across the cells they traverse.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dynbench {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kMetersPerMile = 1609.344;
inline constexpr int kMaxCellLevel = 30;
inline constexpr double kPi = 3.14159265358979323846;

struct GeoPoint {
    double lat = 0.0;  // degrees, [-90, 90]
    double lng = 0.0;  // degrees, [-180, 180]

    GeoPoint() = default;
    GeoPoint(double lat_deg, double lng_deg) : lat(lat_deg), lng(lng_deg) {
        if (!std::isfinite(lat_deg) || !std::isfinite(lng_deg))
            throw std::invalid_argument("GeoPoint: non-finite coordinate");
        if (lat_deg < -90.0 || lat_deg > 90.0)
            throw std::invalid_argument("GeoPoint: latitude out of range [-90, 90]");
        if (lng_deg < -180.0 || lng_deg > 180.0)
            throw std::invalid_argument("GeoPoint: longitude out of range [-180, 180]");
    }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Hierarchical cell identifier: cube face (0-5), level (0-30), and the
// quadtree path packed as `level` two-bit steps, most significant first.
struct CellId {
    std::uint8_t face = 0;
    std::uint8_t level = 0;
    std::uint64_t position = 0;

    friend auto operator<=>(const CellId&, const CellId&) = default;

    CellId parent() const {
        if (level == 0) throw std::logic_error("CellId::parent: level-0 cell has no parent");
        return CellId{face, static_cast<std::uint8_t>(level - 1), position >> 2};
    }

    // Token form used in all CSV/JSON outputs: f{face}-l{level}-{hex position},
    // hex zero-padded so tokens at one level sort like their positions.
    std::string token() const;
    static CellId from_token(std::string_view tok);
};

namespace detail {

inline void check_level(int level) {
    if (level < 0 || level > kMaxCellLevel)
        throw std::invalid_argument("cell level must be in [0, 30]");
}

struct Xyz {
    double x, y, z;
};

inline Xyz to_xyz(const GeoPoint& p) {
    const double phi = p.lat * kPi / 180.0;
    const double theta = p.lng * kPi / 180.0;
    const double c = std::cos(phi);
    return {c * std::cos(theta), c * std::sin(theta), std::sin(phi)};
}

inline GeoPoint to_latlng(const Xyz& v) {
    const double lat = std::atan2(v.z, std::hypot(v.x, v.y)) * 180.0 / kPi;
    const double lng = std::atan2(v.y, v.x) * 180.0 / kPi;
    return {std::clamp(lat, -90.0, 90.0), std::clamp(lng, -180.0, 180.0)};
}

inline int face_of(const Xyz& v) {
    const double ax = std::fabs(v.x), ay = std::fabs(v.y), az = std::fabs(v.z);
    int axis = 0;
    if (ay > ax) axis = 1;
    if (az > (axis == 0 ? ax : ay)) axis = 2;
    const double comp = axis == 0 ? v.x : axis == 1 ? v.y : v.z;
    return comp < 0.0 ? axis + 3 : axis;
}

inline void face_uv(int face, const Xyz& p, double& u, double& v) {
    switch (face) {
        case 0: u = p.y / p.x;  v = p.z / p.x;  break;
        case 1: u = -p.x / p.y; v = p.z / p.y;  break;
        case 2: u = -p.x / p.z; v = -p.y / p.z; break;
        case 3: u = p.z / p.x;  v = p.y / p.x;  break;
        case 4: u = p.z / p.y;  v = -p.x / p.y; break;
        default: u = -p.y / p.z; v = -p.x / p.z; break;
    }
}

inline Xyz face_uv_to_xyz(int face, double u, double v) {
    switch (face) {
        case 0: return {1.0, u, v};
        case 1: return {-u, 1.0, v};
        case 2: return {-u, -v, 1.0};
        case 3: return {-1.0, -v, -u};
        case 4: return {v, -1.0, -u};
        default: return {v, u, -1.0};
    }
}

// Quadratic area-equalizing transform between face coordinates u in [-1,1]
// and normalized cell coordinates s in [0,1].
inline double uv_to_st(double u) {
    return u >= 0.0 ? 0.5 * std::sqrt(1.0 + 3.0 * u) : 1.0 - 0.5 * std::sqrt(1.0 - 3.0 * u);
}

inline double st_to_uv(double s) {
    if (s >= 0.5) return (4.0 * s * s - 1.0) / 3.0;
    const double t = 1.0 - s;
    return (1.0 - 4.0 * t * t) / 3.0;
}

inline std::uint64_t pack_path(std::uint32_t i, std::uint32_t j, int level) {
    std::uint64_t pos = 0;
    for (int k = level - 1; k >= 0; --k) {
        const std::uint64_t step = (((i >> k) & 1u) << 1) | ((j >> k) & 1u);
        pos = (pos << 2) | step;
    }
    return pos;
}

inline void unpack_path(std::uint64_t pos, int level, std::uint32_t& i, std::uint32_t& j) {
    i = 0;
    j = 0;
    for (int k = level - 1; k >= 0; --k) {
        const std::uint64_t step = (pos >> (2 * k)) & 3u;
        i = (i << 1) | static_cast<std::uint32_t>(step >> 1);
        j = (j << 1) | static_cast<std::uint32_t>(step & 1u);
    }
}

}  // namespace detail

// Face-local grid coordinates of a cell; (i, j) index the 2^level x 2^level
// grid on the face.
struct FaceIJ {
    int face = 0;
    std::uint32_t i = 0;
    std::uint32_t j = 0;
};

inline CellId cell_from_face_ij(int face, std::uint32_t i, std::uint32_t j, int level) {
    detail::check_level(level);
    if (face < 0 || face > 5) throw std::invalid_argument("cell face must be in [0, 5]");
    const std::uint64_t n = 1ull << level;
    if (i >= n || j >= n) throw std::invalid_argument("cell (i, j) out of range for level");
    return CellId{static_cast<std::uint8_t>(face), static_cast<std::uint8_t>(level),
                  detail::pack_path(i, j, level)};
}

inline FaceIJ cell_to_face_ij(const CellId& cell) {
    FaceIJ out;
    out.face = cell.face;
    detail::unpack_path(cell.position, cell.level, out.i, out.j);
    return out;
}

inline CellId cell_from_point(const GeoPoint& p, int level) {
    detail::check_level(level);
    const detail::Xyz v = detail::to_xyz(p);
    const int face = detail::face_of(v);
    double u, w;
    detail::face_uv(face, v, u, w);
    const double s = detail::uv_to_st(u);
    const double t = detail::uv_to_st(w);
    // Half-open [i/2^L, (i+1)/2^L) intervals; the s=1 edge folds into the
    // last cell so every point resolves deterministically.
    const auto n = static_cast<double>(1ull << level);
    const auto clamp_index = [&](double x) {
        const double idx = std::floor(x * n);
        return static_cast<std::uint32_t>(std::clamp(idx, 0.0, n - 1.0));
    };
    return cell_from_face_ij(face, clamp_index(s), clamp_index(t), level);
}

// Point at fractional offset (fs, ft) within the cell's (s, t) rectangle;
// (0.5, 0.5) is the cell center.
inline GeoPoint point_in_cell(const CellId& cell, double fs, double ft) {
    const FaceIJ fij = cell_to_face_ij(cell);
    const double n = static_cast<double>(1ull << cell.level);
    const double s = (static_cast<double>(fij.i) + fs) / n;
    const double t = (static_cast<double>(fij.j) + ft) / n;
    const detail::Xyz v = detail::face_uv_to_xyz(fij.face, detail::st_to_uv(s), detail::st_to_uv(t));
    const double norm = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    return detail::to_latlng({v.x / norm, v.y / norm, v.z / norm});
}

inline GeoPoint cell_center(const CellId& cell) { return point_in_cell(cell, 0.5, 0.5); }

// Mean cell area at a level: total sphere area split across 6 * 4^level cells.
inline double mean_cell_area_km2(int level) {
    detail::check_level(level);
    const double r_km = kEarthRadiusM / 1000.0;
    const double sphere_km2 = 4.0 * kPi * r_km * r_km;
    return sphere_km2 / (6.0 * std::pow(4.0, level));
}

inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = a.lat * kPi / 180.0;
    const double phi2 = b.lat * kPi / 180.0;
    const double dphi = phi2 - phi1;
    const double dlam = (b.lng - a.lng) * kPi / 180.0;
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

struct Polyline {
    std::vector<GeoPoint> points;

    double length_m() const {
        double total = 0.0;
        for (std::size_t k = 1; k < points.size(); ++k)
            total += haversine_m(points[k - 1], points[k]);
        return total;
    }
};

// Fraction of a polyline's length falling in each cell. Fractions are in
// (0, 1] and sum to 1 for any nonzero-length polyline.
struct CellAllocation {
    std::map<CellId, double> entries;
};

// Densifies each edge into sub-steps of at most step_m meters and assigns
// each sub-step's length to the cell containing its midpoint. A zero-length
// polyline yields an empty allocation.
inline CellAllocation allocate_polyline(const Polyline& line, int level, double step_m = 10.0) {
    detail::check_level(level);
    if (!(step_m > 0.0)) throw std::invalid_argument("allocate_polyline: step_m must be > 0");
    CellAllocation alloc;
    double total = 0.0;
    for (std::size_t k = 1; k < line.points.size(); ++k) {
        const GeoPoint& a = line.points[k - 1];
        const GeoPoint& b = line.points[k];
        const double len = haversine_m(a, b);
        if (len <= 0.0) continue;
        const auto steps = static_cast<std::size_t>(std::ceil(len / step_m));
        const double sub_len = len / static_cast<double>(steps);
        for (std::size_t q = 0; q < steps; ++q) {
            const double f = (static_cast<double>(q) + 0.5) / static_cast<double>(steps);
            const GeoPoint mid{a.lat + f * (b.lat - a.lat), a.lng + f * (b.lng - a.lng)};
            alloc.entries[cell_from_point(mid, level)] += sub_len;
        }
        total += len;
    }
    if (total <= 0.0) return {};
    for (auto& [cell, meters] : alloc.entries) meters /= total;
    return alloc;
}

inline std::string CellId::token() const {
    const int hex_digits = std::max(1, (2 * static_cast<int>(level) + 3) / 4);
    static constexpr char digits[] = "0123456789abcdef";
    std::string hex(static_cast<std::size_t>(hex_digits), '0');
    std::uint64_t pos = position;
    for (int k = hex_digits - 1; k >= 0 && pos != 0; --k) {
        hex[static_cast<std::size_t>(k)] = digits[pos & 0xf];
        pos >>= 4;
    }
    return "f" + std::to_string(face) + "-l" + std::to_string(level) + "-" + hex;
}

inline CellId CellId::from_token(std::string_view tok) {
    const auto fail = [&] {
        throw std::invalid_argument("invalid cell token: " + std::string(tok));
    };
    if (tok.size() < 6 || tok[0] != 'f') fail();
    const std::size_t dash1 = tok.find('-');
    if (dash1 == std::string_view::npos || dash1 + 1 >= tok.size() || tok[dash1 + 1] != 'l') fail();
    const std::size_t dash2 = tok.find('-', dash1 + 1);
    if (dash2 == std::string_view::npos) fail();
    const auto parse_uint = [&](std::string_view s, unsigned long max) {
        if (s.empty()) fail();
        unsigned long val = 0;
        for (char c : s) {
            if (c < '0' || c > '9') fail();
            val = val * 10 + static_cast<unsigned long>(c - '0');
            if (val > max) fail();
        }
        return val;
    };
    const unsigned long face = parse_uint(tok.substr(1, dash1 - 1), 5);
    const unsigned long level = parse_uint(tok.substr(dash1 + 2, dash2 - dash1 - 2), kMaxCellLevel);
    const std::string_view hex = tok.substr(dash2 + 1);
    if (hex.empty() || hex.size() > 16) fail();
    std::uint64_t pos = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else { fail(); return {}; }
        pos = (pos << 4) | static_cast<std::uint64_t>(d);
    }
    if (level < kMaxCellLevel && (pos >> (2 * level)) != 0) fail();
    return CellId{static_cast<std::uint8_t>(face), static_cast<std::uint8_t>(level), pos};
}

}  // namespace dynbench
