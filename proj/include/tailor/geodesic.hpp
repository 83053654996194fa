#pragma once

#include <span>
#include <vector>

#include "tailor/geometry.hpp"

namespace tailor {

// Shortest-path distance over the mesh edge graph from a set of source
// vertices (Dijkstra). Optional `weld` joins stitched seam copies with
// zero-length edges. Unreachable vertices get +infinity.
[[nodiscard]] std::vector<double> geodesic_from_boundary(const Mesh3& mesh, std::span<const int> sources,
                                                         std::span<const int> weld = {});

// A point on mesh edge (a, b) at parameter t: position = (1 - t) * p_a + t * p_b.
struct IsoPoint {
    int a = -1;
    int b = -1;
    double t = 0.0;
    Vec3 position = Vec3::Zero();
};

struct Polyline {
    std::vector<IsoPoint> points;
    bool closed = false;
};

// Level set {dist == level}. Vertices with dist >= level count as above, so
// every crossed triangle contributes exactly one segment.
[[nodiscard]] std::vector<Polyline> extract_isoline(const Mesh3& mesh, std::span<const double> dist, double level);

} // namespace tailor
