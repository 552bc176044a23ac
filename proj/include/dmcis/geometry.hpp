#pragma once

#include <cmath>

namespace dmcis {

// Simulation time in seconds.
using SimTime = double;

// Planar position in meters.
struct Position {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Position&) const = default;
};

inline bool is_finite(const Position& p)
{
    return std::isfinite(p.x) && std::isfinite(p.y);
}

inline double distance(const Position& p, const Position& q)
{
    return std::hypot(p.x - q.x, p.y - q.y);
}

// Axis-aligned bounding box, inclusive on all edges.
struct Region {
    Position min;
    Position max;

    bool contains(const Position& p) const
    {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }

    bool operator==(const Region&) const = default;
};

} // namespace dmcis
