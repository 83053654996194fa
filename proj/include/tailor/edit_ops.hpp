#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailor/document.hpp"
#include "tailor/edit_op.hpp"
#include "tailor/flatten.hpp"
#include "tailor/geodesic.hpp"

namespace tailor {

// Clearance left between a pushed-out garment vertex and the body (cm).
inline constexpr double kCollisionClearance = 0.2;

// Result of an operation that moves garment vertices but keeps topology.
// `affected` lists every garment triangle with a moved vertex.
struct Deformation {
    Mesh3 garment;
    std::vector<int> affected;
};

// Result of an operation that changes topology (cut, shorten, extend). The
// pattern is already transferred; nothing is re-flattened.
struct TopologyEdit {
    GarmentDocument doc;
    std::vector<int> vertex_map; // pre-edit garment vertex -> new index, -1 if removed
    std::vector<int> affected;   // new or re-triangulated garment triangles
    std::vector<std::string> warnings;
};

struct BoneFrame {
    int bone = -1;
    Vec3 origin = Vec3::Zero();
    Vec3 axis = Vec3::UnitY(); // unit
};

// Bone with the smallest mean distance to `vertices`; NoNearbyBone when the
// skeleton is empty or every bone is farther than `max_distance`.
[[nodiscard]] BoneFrame nearest_bone(const BodyModel& body, const Mesh3& garment, std::span<const int> vertices,
                                     double max_distance = 50.0);

[[nodiscard]] Deformation scale_region(const GarmentDocument& doc, const Region& region, AxisMode mode, double factor);
[[nodiscard]] Deformation scale_region(const GarmentDocument& doc, const Mesh3& garment, const Region& region, AxisMode mode,
                                       double factor);

[[nodiscard]] Deformation move_seam(const GarmentDocument& doc, int seam, AxisMode mode, double offset,
                                    const std::optional<BoundaryRef>& fixed_boundary);
[[nodiscard]] Deformation move_seam(const GarmentDocument& doc, const Mesh3& garment, int seam, AxisMode mode, double offset,
                                    const std::optional<BoundaryRef>& fixed_boundary);

// Pushes candidates that lie inside the body out along the nearest body
// triangle's normal to `clearance`. Returns the moved vertices.
std::vector<int> resolve_body_collisions(Mesh3& garment, const BodyModel& body, std::span<const int> candidates,
                                         double clearance = kCollisionClearance);

// Camera helpers; pixels grow right and down.
[[nodiscard]] Vec3 camera_ray(const Camera& camera, const Vec2& pixel);
[[nodiscard]] Vec2 project_to_screen(const Camera& camera, const Vec3& point);

// Splits the garment along the zero set of a per-vertex field. Only crossings
// in connected cut curves that contain a node accepted by `keep` are used
// (nodes are identified by position). `discard_sign` is +1 / -1 to drop the
// positive / negative side, 0 to keep both sides as separate panels.
struct CutRequest {
    std::vector<double> phi;
    std::function<bool(const Vec3&)> keep;     // whole-curve filter; empty keeps all
    std::function<bool(const Vec3&)> keep_each; // per-node filter; empty keeps all
    int discard_sign = 0;
};

[[nodiscard]] TopologyEdit cut_by_field(const GarmentDocument& doc, const CutRequest& request);

[[nodiscard]] TopologyEdit cut_by_sketch(const GarmentDocument& doc, std::span<const Vec2> sketch, const Camera& camera,
                                         bool both_sides, DiscardSide discard);

// Boundary loop (welded representatives) addressed by a reference; NoBoundary
// when the vertex is not on a garment boundary.
[[nodiscard]] std::vector<int> resolve_boundary(const GarmentDocument& doc, const BoundaryRef& ref);

[[nodiscard]] TopologyEdit shorten(const GarmentDocument& doc, const BoundaryRef& boundary, double distance);

[[nodiscard]] TopologyEdit extend(const GarmentDocument& doc, const BoundaryRef& boundary, double distance,
                                  bool resolve_collisions = true);

// Mirror image of an edit through the document's symmetry plane.
[[nodiscard]] EditOp mirror_edit(const EditOp& edit, const GarmentDocument& doc);

struct EditOutcome {
    GarmentDocument doc;
    std::vector<int> affected;
    std::vector<PanelTrace> traces;
    std::vector<int> vertex_map;
    std::vector<std::string> warnings;
};

// Applies one op (and its mirror twin), updates the pattern and appends a
// history record.
[[nodiscard]] EditOutcome apply_edit(const GarmentDocument& doc, const EditOp& op, bool mirror = false,
                                     AsapMode asap = AsapMode::Auto, const SolverConfig& config = {});

} // namespace tailor
