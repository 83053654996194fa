#include "tailor/document.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "tailor/error.hpp"
#include "tailor/topology.hpp"

namespace tailor {

Vec3 Symmetry::reflect_point(const Vec3& p) const {
    const Vec3 n = normal.normalized();
    return p - 2.0 * (p - point).dot(n) * n;
}

Vec3 Symmetry::reflect_vector(const Vec3& v) const {
    const Vec3 n = normal.normalized();
    return v - 2.0 * v.dot(n) * n;
}

std::optional<int> Symmetry::partner(int panel) const {
    for (const auto& [a, b] : pairs) {
        if (a == panel) return b;
        if (b == panel) return a;
    }
    return std::nullopt;
}

bool EditOp::operator==(const EditOp& o) const {
    auto same_vec2 = [](const std::vector<Vec2>& x, const std::vector<Vec2>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] != y[i]) return false;
        }
        return true;
    };
    auto same_ref = [](const BoundaryRef& x, const BoundaryRef& y) { return x.vertex == y.vertex && x.to == y.to; };
    return kind == o.kind && region.triangles == o.region.triangles && region.anchors == o.region.anchors &&
           mode == o.mode && factor == o.factor && seam == o.seam && offset == o.offset &&
           fixed_boundary.has_value() == o.fixed_boundary.has_value() &&
           (!fixed_boundary || same_ref(*fixed_boundary, *o.fixed_boundary)) && same_vec2(sketch, o.sketch) &&
           camera.eye == o.camera.eye && camera.target == o.camera.target && camera.up == o.camera.up &&
           camera.fov_y_deg == o.camera.fov_y_deg && camera.width == o.camera.width &&
           camera.height == o.camera.height && both_sides == o.both_sides && discard == o.discard &&
           same_ref(boundary, o.boundary) && distance == o.distance;
}

const char* to_string(EditKind kind) noexcept {
    switch (kind) {
    case EditKind::ScaleRegion: return "scale_region";
    case EditKind::MoveSeam: return "move_seam";
    case EditKind::Cut: return "cut";
    case EditKind::Shorten: return "shorten";
    case EditKind::Extend: return "extend";
    }
    return "unknown";
}

const Panel* GarmentDocument::find_panel(int id) const {
    for (const Panel& p : panels) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

Panel* GarmentDocument::find_panel(int id) {
    for (Panel& p : panels) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

int GarmentDocument::panel_index(int id) const {
    for (std::size_t i = 0; i < panels.size(); ++i) {
        if (panels[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

void link_panels(GarmentDocument& doc) {
    std::map<int, std::vector<int>> by_panel;
    for (int t = 0; t < doc.garment.triangle_count(); ++t) {
        const int pid = t < static_cast<int>(doc.garment.panel_ids.size()) ? doc.garment.panel_ids[t] : -1;
        by_panel[pid].push_back(t);
    }
    for (Panel& p : doc.panels) p.garment_triangles = by_panel[p.id];
}

std::vector<int> panel_boundary(const Panel& panel) {
    auto loops = boundary_loops(panel.triangles);
    if (loops.empty()) return {};
    auto length = [&](const std::vector<int>& loop) {
        double len = 0.0;
        for (std::size_t i = 0; i < loop.size(); ++i) {
            len += (panel.vertices[loop[(i + 1) % loop.size()]] - panel.vertices[loop[i]]).norm();
        }
        return len;
    };
    std::size_t best = 0;
    double best_len = length(loops[0]);
    for (std::size_t i = 1; i < loops.size(); ++i) {
        const double len = length(loops[i]);
        if (len > best_len) {
            best = i;
            best_len = len;
        }
    }
    return loops[best];
}

namespace {

[[noreturn]] void fail(const std::string& invariant, const std::string& entity, const std::string& detail = {}) {
    throw Error(ErrorCode::ValidationError, invariant + (detail.empty() ? "" : " (" + detail + ")"), entity);
}

std::string name(const char* kind, int id) { return std::string(kind) + " " + std::to_string(id); }

bool segments_cross(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    };
    const double d1 = orient(q0, q1, p0);
    const double d2 = orient(q0, q1, p1);
    const double d3 = orient(p0, p1, q0);
    const double d4 = orient(p0, p1, q1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

void validate_mesh(const Mesh3& mesh, const char* what, bool needs_panels) {
    const int n = mesh.vertex_count();
    for (int v = 0; v < n; ++v) {
        if (!mesh.vertices[v].allFinite()) fail("vertex coordinates must be finite", std::string(what) + " vertex " + std::to_string(v));
    }
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Tri& tri = mesh.triangles[t];
        for (int c : tri) {
            if (c < 0 || c >= n) fail("triangle index out of range", std::string(what) + " triangle " + std::to_string(t));
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            fail("triangle repeats a vertex", std::string(what) + " triangle " + std::to_string(t));
        }
        const double area = triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        if (!(area > kDegenerateArea)) fail("triangle area must be positive", std::string(what) + " triangle " + std::to_string(t));
    }
    if (needs_panels && mesh.panel_ids.size() != mesh.triangles.size()) {
        fail("panel_ids must be parallel to triangles", what);
    }
}

} // namespace

void validate(const GarmentDocument& doc) {
    validate_mesh(doc.garment, "garment", true);
    validate_mesh(doc.body.mesh, "body", false);

    for (std::size_t b = 0; b < doc.body.skeleton.size(); ++b) {
        const Bone& bone = doc.body.skeleton[b];
        if (!((bone.b - bone.a).norm() > 0.0)) fail("bone must have positive length", "bone " + bone.name);
    }
    if (doc.body.mesh.triangle_count() > 0) {
        for (const FeaturePoint& f : doc.body.features) {
            double best = std::numeric_limits<double>::infinity();
            for (int t = 0; t < doc.body.mesh.triangle_count(); ++t) {
                const auto c = corners(doc.body.mesh, t);
                best = std::min(best, (closest_point_on_triangle(f.position, c[0], c[1], c[2]) - f.position).norm());
            }
            if (best > 1.0) fail("feature point must lie within 1 cm of the body", "feature " + f.name);
        }
    }

    std::set<int> ids;
    for (const Panel& p : doc.panels) {
        if (!ids.insert(p.id).second) fail("panel ids must be unique", name("panel", p.id));
    }
    for (std::size_t t = 0; t < doc.garment.panel_ids.size(); ++t) {
        if (!ids.count(doc.garment.panel_ids[t])) {
            fail("garment triangle references a missing panel", name("triangle", static_cast<int>(t)));
        }
    }

    std::vector<int> owner(static_cast<std::size_t>(doc.garment.vertex_count()), -1);
    for (const Panel& p : doc.panels) {
        const std::string ent = name("panel", p.id);
        const int nv = p.vertex_count();
        if (static_cast<int>(p.garment_triangles.size()) != p.triangle_count()) {
            fail("panel triangle count must equal its garment sub-mesh triangle count", ent,
                 std::to_string(p.triangle_count()) + " vs " + std::to_string(p.garment_triangles.size()));
        }
        if (static_cast<int>(p.corr.size()) != nv) fail("corr must list one garment vertex per panel vertex", ent);
        for (int v = 0; v < nv; ++v) {
            if (!p.vertices[v].allFinite()) fail("panel coordinates must be finite", ent);
            const int g = p.corr[v];
            if (g < 0 || g >= doc.garment.vertex_count()) fail("corr references a missing garment vertex", ent);
            if (owner[g] != -1) fail("corr must be a bijection", ent, "garment vertex " + std::to_string(g) + " used twice");
            owner[g] = p.id;
        }
        double sign = 0.0;
        std::set<int> used;
        for (int k = 0; k < p.triangle_count(); ++k) {
            const Tri& t = p.triangles[k];
            for (int c : t) {
                if (c < 0 || c >= nv) fail("panel triangle index out of range", ent, "triangle " + std::to_string(k));
                used.insert(c);
            }
            const Tri& g = doc.garment.triangles[p.garment_triangles[k]];
            for (int c = 0; c < 3; ++c) {
                if (p.corr[t[c]] != g[c]) {
                    fail("panel triangle must match its garment triangle through corr", ent, "triangle " + std::to_string(k));
                }
            }
            const double a = signed_area(p.vertices[t[0]], p.vertices[t[1]], p.vertices[t[2]]);
            if (!(std::abs(a) > kDegenerateArea)) fail("panel triangle is degenerate", ent, "triangle " + std::to_string(k));
            if (sign == 0.0) sign = a;
            if ((a > 0) != (sign > 0)) fail("panel triangles must share one orientation", ent, "triangle " + std::to_string(k));
        }
        if (static_cast<int>(used.size()) != nv) fail("panel has unreferenced vertices", ent);

        const auto loops = boundary_loops(p.triangles);
        const auto edges = unique_edges(p.triangles);
        const int euler = nv - static_cast<int>(edges.size()) + p.triangle_count();
        if (loops.size() != 1 || euler != 1) fail("panel must have disk topology", ent);
        if (p.boundary.size() != loops[0].size()) fail("boundary must list the panel boundary loop", ent);
        {
            // same cyclic sequence, either direction
            const auto& ref = loops[0];
            const std::size_t m = ref.size();
            auto it = std::find(ref.begin(), ref.end(), p.boundary[0]);
            bool ok = it != ref.end();
            if (ok) {
                const std::size_t off = static_cast<std::size_t>(it - ref.begin());
                bool fwd = true;
                bool bwd = true;
                for (std::size_t i = 0; i < m; ++i) {
                    if (p.boundary[i] != ref[(off + i) % m]) fwd = false;
                    if (p.boundary[i] != ref[(off + m - i) % m]) bwd = false;
                }
                ok = fwd || bwd;
            }
            if (!ok) fail("boundary must list the panel boundary loop", ent);
        }
    }
    for (int g = 0; g < doc.garment.vertex_count(); ++g) {
        if (owner[g] == -1) fail("garment vertex is not covered by any panel", name("vertex", g));
    }

    for (std::size_t s = 0; s < doc.seams.size(); ++s) {
        const SeamLine& seam = doc.seams[s];
        const std::string ent = name("seam", static_cast<int>(s));
        if (seam.side_a.size() != seam.side_b.size() || seam.side_a.empty()) {
            fail("seam chains must be non-empty with equal vertex counts", ent);
        }
        for (const auto* chain : {&seam.side_a, &seam.side_b}) {
            for (int v : *chain) {
                if (v < 0 || v >= doc.garment.vertex_count()) fail("seam references a missing vertex", ent);
            }
        }
        for (std::size_t k = 0; k < seam.side_a.size(); ++k) {
            if ((doc.garment.vertices[seam.side_a[k]] - doc.garment.vertices[seam.side_b[k]]).norm() > 1e-6) {
                fail("stitched vertices must coincide in 3D", ent, "position " + std::to_string(k));
            }
        }
    }

    if (doc.symmetry) {
        if (!(doc.symmetry->normal.norm() > 0.0)) fail("symmetry normal must be non-zero", "symmetry");
        for (const auto& [a, b] : doc.symmetry->pairs) {
            if (!ids.count(a) || !ids.count(b)) fail("symmetry pairing references a missing panel", "symmetry");
        }
    }
}

// Simple-boundary check kept separate: it is quadratic and only needed on load.
bool boundary_is_simple(const Panel& p) {
    const std::size_t m = p.boundary.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;
            if (segments_cross(p.vertices[p.boundary[i]], p.vertices[p.boundary[(i + 1) % m]], p.vertices[p.boundary[j]],
                               p.vertices[p.boundary[(j + 1) % m]])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace tailor
