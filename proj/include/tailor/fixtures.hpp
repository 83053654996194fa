#pragma once

#include "tailor/document.hpp"

// Synthetic garments used by the tests, the acceptance suite and the docs.
namespace tailor::fixtures {

// Flat rectangle w x h (cm) in the z = 0 plane, nx x ny cells. The pattern is
// the garment scaled by `pattern_scale`.
[[nodiscard]] GarmentDocument flat_panel(double width, double height, int nx, int ny, double pattern_scale = 1.0);

struct CylinderSpec {
    double radius = 5.0;
    double height = 10.0;
    int segments = 8;
    int rows = 4;
    double pattern_scale = 1.0; // 2D pattern is this much larger than the drape
    Vec3 center = Vec3::Zero();  // bottom centre; the axis runs along +y
};

// Open cylinder sleeve: one panel closed by a side seam, with a bone on the
// axis.
[[nodiscard]] GarmentDocument cylinder(const CylinderSpec& spec);

// Same cylinder split at `split_row` into a lower (id 0) and an upper (id 1)
// panel joined by a horizontal seam (seam 0: side_a on the lower panel).
[[nodiscard]] GarmentDocument split_cylinder(const CylinderSpec& spec, int split_row);

// Left/right sleeves mirrored across x = 0 (panels 0 and 1) plus a flat
// self-paired front panel straddling the plane (panel 2).
[[nodiscard]] GarmentDocument sleeves(const CylinderSpec& left);

// Flat square in the z = 0 plane centred on a bone along z: perpendicular
// scaling about that bone is an in-plane similarity.
[[nodiscard]] GarmentDocument yoke(double size, int cells);

// Spherical cap (doubly curved) whose pattern is its own uniform flattening.
[[nodiscard]] GarmentDocument cap(double sphere_radius, double opening_deg, int rings, int sectors);

// Large flat body wall z = `offset` facing +z, as a two-triangle mesh.
[[nodiscard]] Mesh3 wall(double half_size, double offset);

} // namespace tailor::fixtures
