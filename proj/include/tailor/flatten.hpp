#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tailor/document.hpp"
#include "tailor/geometry.hpp"

namespace tailor {

struct SolverConfig {
    double w1 = 1000.0; // fixed-vertex weight
    double w2 = 1000.0; // boundary-tangent weight
    int max_iterations = 50;
    double rel_tolerance = 1e-6;
};

// M_i = frame(t_i) * frame(T_i)^-1 for every triangle of `panel`, indexed like
// panel.triangles. `designated_edges` defaults to edge 0 for every triangle.
[[nodiscard]] IntrinsicScaleMap compute_intrinsic_scale_map(const Panel& panel, const Mesh3& garment,
                                                            std::span<const int> designated_edges = {});

// Garment-indexed map covering every panel of the document.
[[nodiscard]] IntrinsicScaleMap compute_document_scale_map(const GarmentDocument& doc);

// Restricts a garment-indexed map to one panel's triangles.
[[nodiscard]] IntrinsicScaleMap panel_scale_map(const IntrinsicScaleMap& garment_map, const Panel& panel);

// Target 2D frames T_edit = M^-1 * t_edit for each panel triangle.
[[nodiscard]] std::vector<LocalFrame> per_triangle_targets(const IntrinsicScaleMap& scale_map, const Panel& panel,
                                                           const Mesh3& edited_garment);

// Linear parallelism residual on a boundary vertex:
// r = (x_next - x_prev) * chord.y - (y_next - y_prev) * chord.x
// with `chord` the unit original chord from prev to next.
struct TangentConstraint {
    int vertex = -1;
    int prev = -1;
    int next = -1;
    Vec2 chord = Vec2::UnitX();
};

struct TangentConstraints {
    std::vector<TangentConstraint> constraints;
    std::vector<int> skipped; // vertices whose original chord was degenerate
};

[[nodiscard]] TangentConstraints build_tangent_constraints(const Panel& panel);
[[nodiscard]] double tangent_residual(const TangentConstraint& c, std::span<const Vec2> coords);
[[nodiscard]] double max_tangent_residual(std::span<const TangentConstraint> constraints, std::span<const Vec2> coords);

struct FixedVertex {
    int vertex = -1;
    Vec2 position = Vec2::Zero();
};

struct StitchProblem {
    int vertex_count = 0;
    std::vector<Tri> triangles;
    std::vector<int> designated_edges;
    double orientation = 1.0; // -1 when the panel winds clockwise
    std::vector<FixedVertex> fixed;
    std::vector<TangentConstraint> tangents;
};

// Half-edge target vectors per triangle: entry k runs corner k -> corner k+1.
using EdgeTargets = std::vector<std::array<Vec2, 3>>;

[[nodiscard]] EdgeTargets edge_targets(const StitchProblem& problem, std::span<const LocalFrame> frames);

// Local step: best rotation (det +1) per triangle taking its targets onto the
// current edges.
[[nodiscard]] std::vector<Mat2> fit_rotations(const StitchProblem& problem, const EdgeTargets& targets,
                                              std::span<const Vec2> coords);

// Global step: sparse least squares over all vertex positions for fixed
// rotations.
[[nodiscard]] std::vector<Vec2> global_step(const StitchProblem& problem, const EdgeTargets& targets,
                                            std::span<const Mat2> rotations, const SolverConfig& config);

[[nodiscard]] double stitch_energy(const StitchProblem& problem, const EdgeTargets& targets,
                                   std::span<const Mat2> rotations, std::span<const Vec2> coords,
                                   const SolverConfig& config);

struct StitchResult {
    std::vector<Vec2> coords;
    std::vector<double> energy_trace; // entry 0 is the initial guess
    int iterations = 0;
    bool converged = false;
};

[[nodiscard]] StitchResult stitch(const StitchProblem& problem, std::span<const LocalFrame> targets,
                                  std::span<const Vec2> initial_guess, const SolverConfig& config = {});

// Fixed-edge selection: the edge whose midpoint is nearest the area centroid,
// ties to the lowest edge index.
[[nodiscard]] std::pair<int, int> select_fixed_edge(std::span<const Vec2> coords, std::span<const Tri> triangles);

// Pins the endpoints of `edge` about its current midpoint and direction at
// the length the targets ask for.
[[nodiscard]] std::vector<FixedVertex> pin_edge(std::pair<int, int> edge, std::span<const Vec2> coords,
                                                const StitchProblem& problem, const EdgeTargets& targets);

// Baseline: plain ARAP flattening using the 3D triangles as targets.
[[nodiscard]] StitchResult flatten_uniform(const Mesh3& sub_mesh, std::optional<std::vector<Vec2>> initial_guess = {},
                                           const SolverConfig& config = {});

// Garment sub-mesh of one panel, indexed like the panel's own vertices.
[[nodiscard]] Mesh3 panel_submesh(const GarmentDocument& doc, const Panel& panel);

enum class AsapMode { Auto, On, Off };

struct PanelTrace {
    int panel_id = -1;
    bool asap = false;
    std::vector<double> energy_trace;
};

struct UpdateResult {
    std::vector<Panel> panels;
    std::vector<PanelTrace> traces;
};

// Re-solves every panel touched by `affected` (garment triangle ids) against
// the edited garment; untouched panels are copied unchanged.
[[nodiscard]] UpdateResult update_pattern(const GarmentDocument& doc, const Mesh3& edited_garment,
                                          std::span<const int> affected, AsapMode asap = AsapMode::Auto,
                                          const SolverConfig& config = {});

} // namespace tailor
