#include <algorithm>
#include <numeric>
#include <set>

#include "edit_internal.hpp"
#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/io.hpp"

namespace tailor {

namespace {

bool is_deformation(EditKind kind) { return kind == EditKind::ScaleRegion || kind == EditKind::MoveSeam; }

Deformation run_deformation(const GarmentDocument& doc, const Mesh3& garment, const EditOp& op) {
    if (op.kind == EditKind::ScaleRegion) return scale_region(doc, garment, op.region, op.mode, op.factor);
    return move_seam(doc, garment, op.seam, op.mode, op.offset, op.fixed_boundary);
}

TopologyEdit run_topology(const GarmentDocument& doc, const EditOp& op) {
    switch (op.kind) {
    case EditKind::Cut:
        return cut_by_sketch(doc, op.sketch, op.camera, op.both_sides, op.discard);
    case EditKind::Shorten:
        return shorten(doc, op.boundary, op.distance);
    case EditKind::Extend:
        return extend(doc, op.boundary, op.distance);
    default:
        throw Error(ErrorCode::InvalidParameter, "not a topology edit", "op");
    }
}

std::set<int> as_set(std::vector<int> v) { return {v.begin(), v.end()}; }

// The twin addresses the same entity as the original (an edit on the
// symmetry plane); applying it again would double the edit.
bool same_target(const GarmentDocument& doc, const EditOp& op, const EditOp& twin) {
    switch (op.kind) {
    case EditKind::ScaleRegion:
        return as_set(op.region.triangles) == as_set(twin.region.triangles);
    case EditKind::MoveSeam:
        return op.seam == twin.seam;
    case EditKind::Shorten:
    case EditKind::Extend:
        return as_set(resolve_boundary(doc, op.boundary)) == as_set(resolve_boundary(doc, twin.boundary));
    case EditKind::Cut:
        return false;
    }
    return false;
}

// Triangles the op addresses, whether or not anything moved.
std::vector<int> intended(const GarmentDocument& doc, const EditOp& op) {
    if (op.kind == EditKind::ScaleRegion) return op.region.triangles;
    std::vector<int> out;
    const auto owner = detail::vertex_panels(doc.garment);
    const SeamLine& line = doc.seams[op.seam];
    const int a = owner[line.side_a.front()], b = owner[line.side_b.front()];
    for (int t = 0; t < doc.garment.triangle_count(); ++t) {
        if (doc.garment.panel_ids[t] == a || doc.garment.panel_ids[t] == b) out.push_back(t);
    }
    return out;
}

int remap(const std::vector<int>& map, int v) {
    if (v < 0 || v >= static_cast<int>(map.size()) || map[v] < 0) {
        throw Error(ErrorCode::InvalidIndex, "mirrored vertex was removed by the edit", "vertex " + std::to_string(v));
    }
    return map[v];
}

} // namespace

EditOutcome apply_edit(const GarmentDocument& doc, const EditOp& op, bool mirror, AsapMode asap,
                       const SolverConfig& config) {
    std::optional<EditOp> twin;
    if (mirror) {
        EditOp m = mirror_edit(op, doc);
        if (!same_target(doc, op, m)) twin = std::move(m);
    }

    EditOutcome out;
    if (is_deformation(op.kind)) {
        Deformation first = run_deformation(doc, doc.garment, op);
        std::set<int> affected(first.affected.begin(), first.affected.end());
        Mesh3 garment = std::move(first.garment);
        if (twin) {
            Deformation second = run_deformation(doc, garment, *twin);
            affected.insert(second.affected.begin(), second.affected.end());
            garment = std::move(second.garment);
        }
        out.affected.assign(affected.begin(), affected.end());
        out.doc = doc;
        if (out.affected.empty()) {
            // Nothing moved: solve once for the energy trace, keep the stored
            // panels so the document stays bitwise identical.
            const auto region = intended(doc, op);
            out.traces = update_pattern(doc, garment, region, asap, config).traces;
        } else {
            UpdateResult update = update_pattern(doc, garment, out.affected, asap, config);
            out.doc.panels = std::move(update.panels);
            out.traces = std::move(update.traces);
        }
        out.doc.garment = std::move(garment);
        link_panels(out.doc);
        out.vertex_map.resize(doc.garment.vertices.size());
        std::iota(out.vertex_map.begin(), out.vertex_map.end(), 0);
    } else {
        TopologyEdit first = run_topology(doc, op);
        out.warnings = first.warnings;
        out.vertex_map = first.vertex_map;
        out.doc = std::move(first.doc);
        if (twin) {
            EditOp m = *twin;
            if (m.kind == EditKind::Shorten || m.kind == EditKind::Extend) {
                m.boundary.vertex = remap(out.vertex_map, m.boundary.vertex);
                if (m.boundary.to) m.boundary.to = remap(out.vertex_map, *m.boundary.to);
            }
            std::optional<TopologyEdit> second;
            try {
                second = run_topology(out.doc, m);
            } catch (const Error& e) {
                // a cut on the symmetry plane has already been made by the original
                if (m.kind != EditKind::Cut ||
                    (e.code() != ErrorCode::OpenLoop && e.code() != ErrorCode::NoIntersection)) {
                    throw;
                }
                out.warnings.push_back("mirrored cut skipped: " + e.detail());
            }
            if (second) {
                for (int& v : out.vertex_map) {
                    if (v >= 0) v = second->vertex_map[v];
                }
                out.warnings.insert(out.warnings.end(), second->warnings.begin(), second->warnings.end());
                out.doc = std::move(second->doc);
            }
        }
        std::vector<char> old(out.doc.garment.vertices.size(), 0);
        for (int v : out.vertex_map) {
            if (v >= 0) old[v] = 1;
        }
        for (int t = 0; t < out.doc.garment.triangle_count(); ++t) {
            const Tri& tri = out.doc.garment.triangles[t];
            if (!old[tri[0]] || !old[tri[1]] || !old[tri[2]]) out.affected.push_back(t);
        }
    }
    out.doc.history.push_back({op, mirror, document_hash(out.doc)});
    return out;
}

} // namespace tailor
