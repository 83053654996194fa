#include "tailor/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "tailor/error.hpp"

namespace tailor {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::SingularFrame: return "SingularFrame";
    case ErrorCode::MismatchedTopology: return "MismatchedTopology";
    case ErrorCode::EmptySource: return "EmptySource";
    case ErrorCode::EmptyIsoline: return "EmptyIsoline";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::NoSymmetryDeclared: return "NoSymmetryDeclared";
    case ErrorCode::UnpairedPanel: return "UnpairedPanel";
    case ErrorCode::DegenerateChord: return "DegenerateChord";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::InvalidFactor: return "InvalidFactor";
    case ErrorCode::DisconnectedRegion: return "DisconnectedRegion";
    case ErrorCode::NoNearbyBone: return "NoNearbyBone";
    case ErrorCode::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::SeamNotFound: return "SeamNotFound";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::OpenLoop: return "OpenLoop";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::NonTriangleFace: return "NonTriangleFace";
    case ErrorCode::MissingGroup: return "MissingGroup";
    }
    return "Unknown";
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - a;
    const Vec2 v = c - a;
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b - a).cross(c - a).normalized();
}

namespace {

template <typename V>
LocalFrame frame_from_edges(const V& u, const V& v, double area, int edge) {
    if (!(area > kDegenerateArea)) {
        throw Error(ErrorCode::DegenerateTriangle, "triangle area " + std::to_string(area) + " below threshold");
    }
    const double lu = u.norm();
    const double lv = v.norm();
    // Interior angle from the dot product and the unsigned area, so the frame
    // does not depend on orientation or embedding.
    const double cos_t = u.dot(v) / (lu * lv);
    const double sin_t = 2.0 * area / (lu * lv);
    LocalFrame f;
    f.edge = edge;
    f.matrix << lu, lv * cos_t,
                0.0, lv * sin_t;
    return f;
}

} // namespace

LocalFrame local_frame(const std::array<Vec3, 3>& tri, int designated_edge) {
    const int e = ((designated_edge % 3) + 3) % 3;
    const Vec3& o = tri[e];
    const Vec3 u = tri[(e + 1) % 3] - o;
    const Vec3 v = tri[(e + 2) % 3] - o;
    return frame_from_edges(u, v, 0.5 * u.cross(v).norm(), e);
}

LocalFrame local_frame(const std::array<Vec2, 3>& tri, int designated_edge) {
    const int e = ((designated_edge % 3) + 3) % 3;
    const Vec2& o = tri[e];
    const Vec2 u = tri[(e + 1) % 3] - o;
    const Vec2 v = tri[(e + 2) % 3] - o;
    return frame_from_edges(u, v, std::abs(0.5 * (u.x() * v.y() - u.y() * v.x())), e);
}

Eigen::Vector3d barycentric(const Vec2& p, const std::array<Vec2, 3>& tri) {
    const Vec2 e0 = tri[1] - tri[0];
    const Vec2 e1 = tri[2] - tri[0];
    const double det = e0.x() * e1.y() - e0.y() * e1.x();
    if (!(std::abs(0.5 * det) > kDegenerateArea)) {
        throw Error(ErrorCode::DegenerateTriangle, "barycentric: triangle is degenerate");
    }
    const Vec2 d = p - tri[0];
    const double b = (d.x() * e1.y() - d.y() * e1.x()) / det;
    const double c = (e0.x() * d.y() - e0.y() * d.x()) / det;
    return {1.0 - b - c, b, c};
}

Eigen::Vector3d barycentric(const Vec3& p, const std::array<Vec3, 3>& tri) {
    const Vec3 e0 = tri[1] - tri[0];
    const Vec3 e1 = tri[2] - tri[0];
    const double a00 = e0.dot(e0);
    const double a01 = e0.dot(e1);
    const double a11 = e1.dot(e1);
    const double det = a00 * a11 - a01 * a01;
    if (!(0.5 * e0.cross(e1).norm() > kDegenerateArea)) {
        throw Error(ErrorCode::DegenerateTriangle, "barycentric: triangle is degenerate");
    }
    // Normal equations of the in-plane projection.
    const Vec3 d = p - tri[0];
    const double r0 = d.dot(e0);
    const double r1 = d.dot(e1);
    const double b = (a11 * r0 - a01 * r1) / det;
    const double c = (a00 * r1 - a01 * r0) / det;
    return {1.0 - b - c, b, c};
}

std::array<Vec3, 3> corners(const Mesh3& mesh, int triangle) {
    const Tri& t = mesh.triangles[static_cast<std::size_t>(triangle)];
    return {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
}

std::array<Vec2, 3> corners(const Panel& panel, int triangle) {
    const Tri& t = panel.triangles[static_cast<std::size_t>(triangle)];
    return {panel.vertices[t[0]], panel.vertices[t[1]], panel.vertices[t[2]]};
}

double panel_area(const Panel& panel) {
    double area = 0.0;
    for (const Tri& t : panel.triangles) {
        area += std::abs(signed_area(panel.vertices[t[0]], panel.vertices[t[1]], panel.vertices[t[2]]));
    }
    return area;
}

double mesh_area(const Mesh3& mesh) {
    double area = 0.0;
    for (const Tri& t : mesh.triangles) {
        area += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    }
    return area;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;
    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

} // namespace tailor
