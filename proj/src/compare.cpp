#include "tailor/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailor/error.hpp"
#include "tailor/io.hpp"

namespace tailor {

namespace {

double point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * d)).norm();
}

double directed(std::span<const Vec2> a, std::span<const int> a_loop, std::span<const Vec2> b,
                std::span<const int> b_loop, int samples) {
    const std::size_t na = a_loop.size(), nb = b_loop.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        const Vec2& p0 = a[a_loop[i]];
        const Vec2& p1 = a[a_loop[(i + 1) % na]];
        for (int s = 0; s < samples; ++s) {
            const Vec2 p = p0 + (p1 - p0) * (static_cast<double>(s) / samples);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < nb; ++j) best = std::min(best, point_segment(p, b[b_loop[j]], b[b_loop[(j + 1) % nb]]));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

double coords_area(std::span<const Vec2> coords, std::span<const Tri> triangles) {
    double area = 0.0;
    for (const Tri& t : triangles) area += std::abs(signed_area(coords[t[0]], coords[t[1]], coords[t[2]]));
    return area;
}

void measure(MethodMetrics& m, const Panel* original, const Panel& shape, const TangentConstraints* chords) {
    m.area = coords_area(m.coords, shape.triangles);
    if (!original) return;
    const double base = panel_area(*original);
    if (base > 0.0) m.area_ratio = m.area / base;
    m.hausdorff = boundary_hausdorff(m.coords, shape.boundary, original->vertices, original->boundary);
    if (chords) m.max_tangent_residual = max_tangent_residual(chords->constraints, m.coords);
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(round9(*v)) : nlohmann::json(nullptr);
}

nlohmann::json metrics_json(const MethodMetrics& m) {
    return {{"area", round9(m.area)},
            {"area_ratio", optional_json(m.area_ratio)},
            {"hausdorff", optional_json(m.hausdorff)},
            {"max_tangent_residual", optional_json(m.max_tangent_residual)}};
}

} // namespace

double boundary_hausdorff(std::span<const Vec2> a_coords, std::span<const int> a_loop, std::span<const Vec2> b_coords,
                          std::span<const int> b_loop, int samples_per_edge) {
    if (a_loop.empty() || b_loop.empty()) throw Error(ErrorCode::InvalidParameter, "empty boundary", "boundary");
    samples_per_edge = std::max(samples_per_edge, 1);
    return std::max(directed(a_coords, a_loop, b_coords, b_loop, samples_per_edge),
                    directed(b_coords, b_loop, a_coords, a_loop, samples_per_edge));
}

std::vector<Vec2> align_rigid(std::span<const Vec2> moving, std::span<const Vec2> fixed) {
    if (moving.size() != fixed.size() || moving.empty()) {
        throw Error(ErrorCode::MismatchedTopology, "alignment needs matching point sets", "coords");
    }
    Vec2 cm = Vec2::Zero(), cf = Vec2::Zero();
    for (std::size_t i = 0; i < moving.size(); ++i) {
        cm += moving[i];
        cf += fixed[i];
    }
    cm /= static_cast<double>(moving.size());
    cf /= static_cast<double>(fixed.size());
    double dot = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < moving.size(); ++i) {
        const Vec2 m = moving[i] - cm, f = fixed[i] - cf;
        dot += m.dot(f);
        cross += m.x() * f.y() - m.y() * f.x();
    }
    const Mat2 r = Eigen::Rotation2Dd(std::atan2(cross, dot)).toRotationMatrix();
    std::vector<Vec2> out(moving.size());
    for (std::size_t i = 0; i < moving.size(); ++i) out[i] = cf + r * (moving[i] - cm);
    return out;
}

std::vector<PanelComparison> compare_panels(const GarmentDocument& original, const GarmentDocument& edited,
                                            std::span<const int> panel_ids, const SolverConfig& config) {
    std::vector<PanelComparison> rows;
    for (int id : panel_ids) {
        const Panel* panel = edited.find_panel(id);
        if (!panel) throw Error(ErrorCode::InvalidIndex, "no such panel", "panel " + std::to_string(id));
        const Panel* before = original.find_panel(id);

        PanelComparison row;
        row.panel = id;
        if (before) row.original_area = panel_area(*before);
        std::optional<TangentConstraints> chords;
        if (before && before->vertex_count() == panel->vertex_count()) chords = build_tangent_constraints(*before);
        const TangentConstraints* c = chords ? &*chords : nullptr;

        row.scale_preserving.coords = panel->vertices;
        measure(row.scale_preserving, before, *panel, c);

        const StitchResult flat = flatten_uniform(panel_submesh(edited, *panel), panel->vertices, config);
        row.uniform.coords = align_rigid(flat.coords, panel->vertices);
        measure(row.uniform, before, *panel, c);
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json comparison_to_json(std::span<const PanelComparison> rows) {
    nlohmann::json panels = nlohmann::json::array();
    for (const PanelComparison& r : rows) {
        panels.push_back({{"panel", r.panel},
                          {"original_area", optional_json(r.original_area)},
                          {"scale_preserving", metrics_json(r.scale_preserving)},
                          {"uniform", metrics_json(r.uniform)}});
    }
    return {{"version", kFormatVersion}, {"panels", panels}};
}

} // namespace tailor
