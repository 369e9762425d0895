#pragma once

#include <algorithm>
#include <cmath>

namespace mapsim {

struct Loc2 {
    double x = 0.0;
    double y = 0.0;
};

struct Loc3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Loc2 ground() const { return {x, y}; }
};

inline double distance(const Loc2& a, const Loc2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Loc3& a, const Loc3& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

// 3D distance from an airborne node to a grounded one (z = 0).
inline double distance(const Loc3& a, const Loc2& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z);
}

// Deployment region: footprint [0, x_max] x [0, y_max], altitude band [h_min, h_max].
struct Region {
    double x_max = 200.0;
    double y_max = 200.0;
    double h_min = 20.0;
    double h_max = 120.0;

    bool contains(const Loc3& p) const {
        return p.x >= 0.0 && p.x <= x_max && p.y >= 0.0 && p.y <= y_max &&
               p.z >= h_min && p.z <= h_max;
    }

    bool contains_footprint(const Loc2& p) const {
        return p.x >= 0.0 && p.x <= x_max && p.y >= 0.0 && p.y <= y_max;
    }

    Loc3 clip(const Loc3& p) const {
        return {std::clamp(p.x, 0.0, x_max), std::clamp(p.y, 0.0, y_max),
                std::clamp(p.z, h_min, h_max)};
    }

    Loc2 clip(const Loc2& p) const {
        return {std::clamp(p.x, 0.0, x_max), std::clamp(p.y, 0.0, y_max)};
    }

    double diameter() const {
        return std::hypot(x_max, y_max, h_max - h_min);
    }

    double mid_height() const { return 0.5 * (h_min + h_max); }

    bool valid() const { return x_max > 0.0 && y_max > 0.0 && h_max > h_min && h_min >= 0.0; }
};

// Elevation angle in degrees from a ground point up to an airborne one.
inline double elevation_deg(const Loc3& air, const Loc2& ground) {
    double horiz = distance(air.ground(), ground);
    return std::atan2(air.z, horiz) * 180.0 / M_PI;
}

inline double elevation_deg(const Loc3& a, const Loc3& b) {
    double horiz = distance(a.ground(), b.ground());
    double dz = std::abs(a.z - b.z);
    return std::atan2(dz, horiz) * 180.0 / M_PI;
}

// Angle in degrees between directions (from->a) and (from->b).
inline double angle_between_deg(const Loc3& from, const Loc3& a, const Loc3& b) {
    double ax = a.x - from.x, ay = a.y - from.y, az = a.z - from.z;
    double bx = b.x - from.x, by = b.y - from.y, bz = b.z - from.z;
    double na = std::sqrt(ax * ax + ay * ay + az * az);
    double nb = std::sqrt(bx * bx + by * by + bz * bz);
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = (ax * bx + ay * by + az * bz) / (na * nb);
    return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / M_PI;
}

}  // namespace mapsim
