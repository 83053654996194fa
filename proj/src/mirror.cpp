#include <cmath>
#include <limits>

#include "edit_internal.hpp"
#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"

namespace tailor {

namespace {

struct Mirror {
    const GarmentDocument& doc;
    const Symmetry& sym;
    std::vector<int> owner;
    double tol;

    Mirror(const GarmentDocument& d, const Symmetry& s) : doc(d), sym(s), owner(detail::vertex_panels(d.garment)) {
        double extent = 1.0;
        for (const Vec3& p : d.garment.vertices) extent = std::max(extent, p.cwiseAbs().maxCoeff());
        tol = 1e-6 * extent;
    }

    int partner_panel(int pid) const {
        const auto p = sym.partner(pid);
        if (!p) throw Error(ErrorCode::UnpairedPanel, "panel has no mirror partner", "panel " + std::to_string(pid));
        return *p;
    }

    int vertex(int v) const {
        detail::check_vertex(doc.garment, v);
        const int target = partner_panel(owner[v]);
        const Vec3 r = sym.reflect_point(doc.garment.vertices[v]);
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int u = 0; u < doc.garment.vertex_count(); ++u) {
            if (owner[u] != target) continue;
            const double d = (doc.garment.vertices[u] - r).norm();
            if (d < best_d) {
                best_d = d;
                best = u;
            }
        }
        if (best < 0 || best_d > tol) {
            throw Error(ErrorCode::UnpairedPanel, "no mirrored vertex", "vertex " + std::to_string(v));
        }
        return best;
    }

    Vec3 centroid(int t) const {
        const auto c = corners(doc.garment, t);
        return (c[0] + c[1] + c[2]) / 3.0;
    }

    int triangle(int t) const {
        if (t < 0 || t >= doc.garment.triangle_count()) {
            throw Error(ErrorCode::InvalidIndex, "triangle index out of range", "triangle " + std::to_string(t));
        }
        const int target = partner_panel(doc.garment.panel_ids[t]);
        const Vec3 r = sym.reflect_point(centroid(t));
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int u = 0; u < doc.garment.triangle_count(); ++u) {
            if (doc.garment.panel_ids[u] != target) continue;
            const double d = (centroid(u) - r).norm();
            if (d < best_d) {
                best_d = d;
                best = u;
            }
        }
        if (best < 0 || best_d > tol) {
            throw Error(ErrorCode::UnpairedPanel, "no mirrored triangle", "triangle " + std::to_string(t));
        }
        return best;
    }

    // Reflection reverses loop direction, so the run ends swap.
    BoundaryRef boundary(const BoundaryRef& ref) const {
        BoundaryRef out;
        if (ref.to) {
            out.vertex = vertex(*ref.to);
            out.to = vertex(ref.vertex);
        } else {
            out.vertex = vertex(ref.vertex);
        }
        return out;
    }

    int seam(int s) const {
        if (s < 0 || s >= static_cast<int>(doc.seams.size())) {
            throw Error(ErrorCode::SeamNotFound, "no such seam", "seam " + std::to_string(s));
        }
        const SeamLine& line = doc.seams[s];
        std::vector<int> a, b;
        for (int v : line.side_a) a.push_back(vertex(v));
        for (int v : line.side_b) b.push_back(vertex(v));
        for (std::size_t k = 0; k < doc.seams.size(); ++k) {
            if (doc.seams[k].side_a == a && doc.seams[k].side_b == b) return static_cast<int>(k);
        }
        throw Error(ErrorCode::UnpairedPanel, "no mirrored seam with the same orientation", "seam " + std::to_string(s));
    }
};

} // namespace

EditOp mirror_edit(const EditOp& edit, const GarmentDocument& doc) {
    if (!doc.symmetry) throw Error(ErrorCode::NoSymmetryDeclared, "document declares no symmetry", "symmetry");
    const Mirror m(doc, *doc.symmetry);
    EditOp out = edit;
    switch (edit.kind) {
    case EditKind::ScaleRegion:
        for (int& t : out.region.triangles) t = m.triangle(t);
        for (int& v : out.region.anchors) v = m.vertex(v);
        break;
    case EditKind::MoveSeam:
        out.seam = m.seam(edit.seam);
        if (edit.fixed_boundary) out.fixed_boundary = m.boundary(*edit.fixed_boundary);
        break;
    case EditKind::Cut: {
        const Symmetry& s = *doc.symmetry;
        out.camera.eye = s.reflect_point(edit.camera.eye);
        out.camera.target = s.reflect_point(edit.camera.target);
        out.camera.up = s.reflect_vector(edit.camera.up);
        for (Vec2& p : out.sketch) p.x() = edit.camera.width - p.x();
        if (edit.discard == DiscardSide::Left) out.discard = DiscardSide::Right;
        if (edit.discard == DiscardSide::Right) out.discard = DiscardSide::Left;
        break;
    }
    case EditKind::Shorten:
    case EditKind::Extend:
        out.boundary = m.boundary(edit.boundary);
        break;
    }
    return out;
}

} // namespace tailor
