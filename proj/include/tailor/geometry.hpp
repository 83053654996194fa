#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tailor {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Tri = std::array<int, 3>;

// Triangles below this area (cm^2) are treated as collapsed.
inline constexpr double kDegenerateArea = 1e-10;

// Triangle mesh in centimeters. `panel_ids` is parallel to `triangles` for
// garments and empty for body meshes.
struct Mesh3 {
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;
    std::vector<int> panel_ids;

    [[nodiscard]] int vertex_count() const noexcept { return static_cast<int>(vertices.size()); }
    [[nodiscard]] int triangle_count() const noexcept { return static_cast<int>(triangles.size()); }
};

// One flat sewing piece. Triangle k of the panel corresponds to the k-th
// garment triangle carrying this panel id; `corr` maps panel vertices to
// garment vertices.
struct Panel {
    int id = 0;
    std::vector<Vec2> vertices;
    std::vector<Tri> triangles;
    std::vector<int> boundary;
    std::vector<int> corr;
    std::vector<int> garment_triangles; // derived, not serialized

    [[nodiscard]] int vertex_count() const noexcept { return static_cast<int>(vertices.size()); }
    [[nodiscard]] int triangle_count() const noexcept { return static_cast<int>(triangles.size()); }
};

struct Bone {
    std::string name;
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
};

struct FeaturePoint {
    std::string name;
    Vec3 position = Vec3::Zero();
};

struct BodyModel {
    Mesh3 mesh;
    std::vector<Bone> skeleton;
    std::vector<FeaturePoint> features;
};

// Two stitched chains of garment vertices; side_a[k] is sewn to side_b[k].
struct SeamLine {
    std::vector<int> side_a;
    std::vector<int> side_b;
};

// Columns are the frame-aligned edge vectors u = (|u|, 0) and
// v = (|v| cos t, |v| sin t) leaving the origin vertex of `edge`.
struct LocalFrame {
    Mat2 matrix = Mat2::Identity();
    int edge = 0;
};

[[nodiscard]] double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
[[nodiscard]] double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);
[[nodiscard]] Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c);

[[nodiscard]] LocalFrame local_frame(const std::array<Vec3, 3>& tri, int designated_edge = 0);
[[nodiscard]] LocalFrame local_frame(const std::array<Vec2, 3>& tri, int designated_edge = 0);

// Barycentric coordinates; 3D points are projected into the triangle plane.
// The last coordinate is 1 - a - b so the sum is exactly one.
[[nodiscard]] Eigen::Vector3d barycentric(const Vec2& p, const std::array<Vec2, 3>& tri);
[[nodiscard]] Eigen::Vector3d barycentric(const Vec3& p, const std::array<Vec3, 3>& tri);

[[nodiscard]] std::array<Vec3, 3> corners(const Mesh3& mesh, int triangle);
[[nodiscard]] std::array<Vec2, 3> corners(const Panel& panel, int triangle);

[[nodiscard]] double panel_area(const Panel& panel);
[[nodiscard]] double mesh_area(const Mesh3& mesh);

// Closest point on triangle (Ericson's region test).
[[nodiscard]] Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
[[nodiscard]] double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

} // namespace tailor
