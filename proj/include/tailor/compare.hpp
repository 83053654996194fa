#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "tailor/document.hpp"
#include "tailor/flatten.hpp"

namespace tailor {

// Symmetric Hausdorff distance between two closed boundary polygons. Edges
// are sampled `samples_per_edge` times on each side.
[[nodiscard]] double boundary_hausdorff(std::span<const Vec2> a_coords, std::span<const int> a_loop,
                                        std::span<const Vec2> b_coords, std::span<const int> b_loop,
                                        int samples_per_edge = 32);

// Best rotation + translation taking `moving` onto `fixed` (same indexing).
[[nodiscard]] std::vector<Vec2> align_rigid(std::span<const Vec2> moving, std::span<const Vec2> fixed);

struct MethodMetrics {
    std::vector<Vec2> coords;
    double area = 0.0;
    std::optional<double> area_ratio;           // against the input panel
    std::optional<double> hausdorff;            // boundary vs the input panel, cm
    std::optional<double> max_tangent_residual; // input-panel chords on this result
};

struct PanelComparison {
    int panel = -1;
    std::optional<double> original_area;
    MethodMetrics scale_preserving;
    MethodMetrics uniform;
};

// Flattens each listed panel of `edited` both ways. The scale-preserving
// result is the panel as stored in `edited`; the uniform one is a fresh
// flattening of its 3D sub-mesh, rigidly aligned onto it. Metrics against
// the input panel are left empty when `original` has no panel with that id;
// the tangent residual also needs matching vertex counts.
[[nodiscard]] std::vector<PanelComparison> compare_panels(const GarmentDocument& original,
                                                          const GarmentDocument& edited, std::span<const int> panel_ids,
                                                          const SolverConfig& config = {});

[[nodiscard]] nlohmann::json comparison_to_json(std::span<const PanelComparison> rows);

} // namespace tailor
