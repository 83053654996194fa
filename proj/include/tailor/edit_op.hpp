#pragma once

#include <optional>
#include <vector>

#include "tailor/geometry.hpp"

namespace tailor {

enum class EditKind { ScaleRegion, MoveSeam, Cut, Shorten, Extend };
enum class AxisMode { Along, Perpendicular };

// Which side of the cutting curve is discarded. Left/Right are relative to
// the sketch direction on screen; None keeps both sides as separate panels.
enum class DiscardSide { None, Left, Right };

struct Region {
    std::vector<int> triangles;
    std::vector<int> anchors; // garment vertices that must not move
};

// A garment boundary loop identified by any garment vertex on it. With `to`
// set, only the run from `vertex` to `to` (along the loop) is used.
struct BoundaryRef {
    int vertex = -1;
    std::optional<int> to;
};

// Pinhole camera; pixels grow right and down.
struct Camera {
    Vec3 eye{0.0, 0.0, 10.0};
    Vec3 target = Vec3::Zero();
    Vec3 up = Vec3::UnitY();
    double fov_y_deg = 45.0;
    int width = 800;
    int height = 600;
};

struct EditOp {
    EditKind kind = EditKind::ScaleRegion;

    // ScaleRegion
    Region region;
    AxisMode mode = AxisMode::Along;
    double factor = 1.0;

    // MoveSeam
    int seam = -1;
    double offset = 0.0;
    std::optional<BoundaryRef> fixed_boundary;

    // Cut
    std::vector<Vec2> sketch;
    Camera camera;
    bool both_sides = true;
    DiscardSide discard = DiscardSide::None;

    // Shorten / Extend
    BoundaryRef boundary;
    double distance = 0.0;

    bool operator==(const EditOp& other) const;
};

[[nodiscard]] const char* to_string(EditKind kind) noexcept;

} // namespace tailor
