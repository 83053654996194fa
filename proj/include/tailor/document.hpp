#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tailor/edit_op.hpp"
#include "tailor/geometry.hpp"

namespace tailor {

inline constexpr const char* kFormatVersion = "pt-1";

// Left-right symmetry: a reflection plane plus the panel pairing table
// (self-paired panels straddle the plane).
struct Symmetry {
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::UnitX();
    std::vector<std::pair<int, int>> pairs;

    [[nodiscard]] Vec3 reflect_point(const Vec3& p) const;
    [[nodiscard]] Vec3 reflect_vector(const Vec3& v) const;
    [[nodiscard]] std::optional<int> partner(int panel) const;
};

// Per-triangle matrices M = frame(3D) * frame(2D)^-1, indexed by garment
// triangle.
struct IntrinsicScaleMap {
    std::vector<Mat2> matrices;
    std::vector<int> designated_edges;
};

struct HistoryEntry {
    EditOp op;
    bool mirror = false;
    std::string hash;
};

struct GarmentDocument {
    std::string version = kFormatVersion;
    BodyModel body;
    Mesh3 garment;
    std::vector<Panel> panels;
    std::vector<SeamLine> seams;
    std::optional<Symmetry> symmetry;
    IntrinsicScaleMap scale_map;
    std::vector<HistoryEntry> history;

    [[nodiscard]] const Panel* find_panel(int id) const;
    [[nodiscard]] Panel* find_panel(int id);
    [[nodiscard]] int panel_index(int id) const;
};

// Fills Panel::garment_triangles from the garment's panel ids.
void link_panels(GarmentDocument& doc);

// Checks every cross-reference and geometric invariant; throws
// ValidationError naming the offending entity.
void validate(const GarmentDocument& doc);

// True when no two non-adjacent boundary segments cross in 2D.
[[nodiscard]] bool boundary_is_simple(const Panel& panel);

// Dominant boundary loop of a panel (longest in 2D).
[[nodiscard]] std::vector<int> panel_boundary(const Panel& panel);

} // namespace tailor
