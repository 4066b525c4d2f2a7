#pragma once

#include <cmath>
#include <vector>

#include "geometry.hpp"

namespace helmbem::shapes {

inline Mesh unit_square() { return Mesh::from_nodes({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}); }

// circumradius equals the edge length for a hexagon
inline Mesh regular_polygon(int n, double radius) {
    std::vector<Vec2> p;
    for (int i = 0; i < n; ++i) p.emplace_back(radius * std::cos(2 * kPi * i / n), radius * std::sin(2 * kPi * i / n));
    return Mesh::from_nodes(p);
}

inline Mesh hexagon(double edge = 2.26) { return regular_polygon(6, edge); }

// points on an ellipse at uneven angles: convex, no two edges alike
inline Mesh irregular_octagon() {
    const double t[8] = {0.0, 0.7, 1.5, 2.2, 3.1, 3.9, 4.6, 5.5};
    std::vector<Vec2> p;
    for (double a : t) p.emplace_back(2.0 * std::cos(a), 1.3 * std::sin(a));
    return Mesh::from_nodes(p);
}

}  // namespace helmbem::shapes
