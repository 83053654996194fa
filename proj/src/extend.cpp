#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "edit_internal.hpp"
#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/flatten.hpp"
#include "tailor/topology.hpp"

namespace tailor {

namespace {

struct Run {
    std::vector<int> vertices; // representatives
    std::vector<GarmentBoundaryLoop::Edge> edges;
    bool cyclic = false;
};

Run find_run(const GarmentDocument& doc, const BoundaryRef& ref, std::span<const int> weld) {
    const auto reps = resolve_boundary(doc, ref); // validates and reports NoBoundary
    for (const auto& loop : garment_boundary_loops(doc.garment, weld)) {
        auto it = std::find(loop.vertices.begin(), loop.vertices.end(), reps.front());
        if (it == loop.vertices.end()) continue;
        Run run;
        run.vertices = reps;
        const std::size_t n = loop.vertices.size();
        const std::size_t start = static_cast<std::size_t>(it - loop.vertices.begin());
        run.cyclic = loop.closed && !ref.to;
        const std::size_t count = run.cyclic ? loop.edges.size() : reps.size() - 1;
        for (std::size_t k = 0; k < count; ++k) run.edges.push_back(loop.edges[(start + k) % n]);
        return run;
    }
    throw Error(ErrorCode::NoBoundary, "vertex is not on a garment boundary", "vertex " + std::to_string(ref.vertex));
}

} // namespace

TopologyEdit extend(const GarmentDocument& doc, const BoundaryRef& boundary, double distance, bool resolve_collisions) {
    if (!std::isfinite(distance) || distance < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "distance must be finite and non-negative", "distance");
    }
    const auto weld = detail::doc_weld(doc);
    const Run run = find_run(doc, boundary, weld);
    TopologyEdit result{doc, {}, {}, {}};
    result.vertex_map.resize(doc.garment.vertices.size());
    std::iota(result.vertex_map.begin(), result.vertex_map.end(), 0);
    if (distance == 0.0) return result;

    const Mesh3& g = doc.garment;
    const int nv = g.vertex_count();

    // Averaged normal per representative over every incident triangle.
    std::vector<Vec3> normal(nv, Vec3::Zero());
    for (int t = 0; t < g.triangle_count(); ++t) {
        const auto c = corners(g, t);
        const Vec3 n = triangle_normal(c[0], c[1], c[2]);
        for (int v : g.triangles[t]) normal[weld[v]] += n;
    }

    // Growth direction: boundary tangent x normal, one sign for the whole run.
    const std::size_t m = run.vertices.size();
    std::map<int, Vec3> direction;
    for (std::size_t k = 0; k < m; ++k) {
        const int r = run.vertices[k];
        int prev = r, next = r;
        if (run.cyclic) {
            prev = run.vertices[(k + m - 1) % m];
            next = run.vertices[(k + 1) % m];
        } else {
            if (k > 0) prev = run.vertices[k - 1];
            if (k + 1 < m) next = run.vertices[k + 1];
        }
        const Vec3 tangent = (g.vertices[next] - g.vertices[prev]).normalized();
        const Vec3 d = tangent.cross(normal[r].normalized());
        if (!(d.norm() > 1e-12)) {
            throw Error(ErrorCode::SelfIntersection, "boundary direction is undefined", "vertex " + std::to_string(r));
        }
        direction[r] = d.normalized();
    }
    int vote = 0;
    for (const auto& e : run.edges) {
        const auto c = corners(g, e.triangle);
        const Vec3 outward = (g.vertices[e.b] - g.vertices[e.a]).cross(triangle_normal(c[0], c[1], c[2]));
        for (int v : {e.a, e.b}) vote += direction.at(weld[v]).dot(outward) >= 0.0 ? 1 : -1;
    }
    if (vote < 0) {
        for (auto& [r, d] : direction) d = -d;
    }

    GarmentDocument out = doc;
    std::map<int, int> grown; // garment copy -> new vertex
    std::vector<int> fresh;
    for (const auto& e : run.edges) {
        for (int v : {e.a, e.b}) {
            if (grown.count(v)) continue;
            grown[v] = out.garment.vertex_count();
            fresh.push_back(out.garment.vertex_count());
            out.garment.vertices.push_back(g.vertices[v] + distance * direction.at(weld[v]));
        }
    }
    if (resolve_collisions) {
        for (int v : resolve_body_collisions(out.garment, doc.body, fresh)) {
            result.warnings.push_back("vertex " + std::to_string(v) + " pushed out of the body");
        }
    }

    // Strip triangles continue the winding of the triangle owning each edge.
    for (const auto& e : run.edges) {
        const int a = e.a, b = e.b, a2 = grown.at(e.a), b2 = grown.at(e.b);
        const int pid = g.panel_ids[e.triangle];
        for (const Tri& tri : {Tri{b, a, a2}, Tri{b, a2, b2}}) {
            const auto c = std::array<Vec3, 3>{out.garment.vertices[tri[0]], out.garment.vertices[tri[1]],
                                               out.garment.vertices[tri[2]]};
            if (!(triangle_area(c[0], c[1], c[2]) > kDegenerateArea)) {
                throw Error(ErrorCode::SelfIntersection, "extension strip collapses",
                            "vertex " + std::to_string(weld[a]));
            }
            result.affected.push_back(out.garment.triangle_count());
            out.garment.triangles.push_back(tri);
            out.garment.panel_ids.push_back(pid);
        }
    }

    // 2D: unfold each new vertex into the plane of its host triangles and
    // carry it across with the host's barycentric map.
    std::map<int, std::vector<const GarmentBoundaryLoop::Edge*>> hosts;
    for (const auto& e : run.edges) {
        hosts[e.a].push_back(&e);
        hosts[e.b].push_back(&e);
    }
    std::map<int, std::pair<int, int>> local_tri; // garment triangle -> (panel index, local triangle)
    for (std::size_t pi = 0; pi < doc.panels.size(); ++pi) {
        const Panel& p = doc.panels[pi];
        for (int k = 0; k < p.triangle_count(); ++k) local_tri[p.garment_triangles[k]] = {static_cast<int>(pi), k};
    }
    for (const auto& [v, nvx] : grown) {
        Vec2 sum = Vec2::Zero();
        int pi = -1;
        for (const auto* e : hosts.at(v)) {
            const auto [panel_index, k] = local_tri.at(e->triangle);
            pi = panel_index;
            const auto c3 = corners(g, e->triangle);
            const auto c2 = corners(doc.panels[panel_index], k);
            const Vec3 n = triangle_normal(c3[0], c3[1], c3[2]);
            const Vec3 along = (g.vertices[e->b] - g.vertices[e->a]).normalized();
            const Vec3 outward = along.cross(n);
            const Vec3 delta = out.garment.vertices[nvx] - g.vertices[v];
            const double t = delta.dot(along);
            const Vec3 unfolded = t * along + (delta - t * along).norm() * outward;
            const Eigen::Vector3d w = barycentric(Vec3(g.vertices[v] + unfolded), c3);
            sum += w[0] * c2[0] + w[1] * c2[1] + w[2] * c2[2];
        }
        Panel& p = out.panels[pi];
        p.vertices.push_back(sum / static_cast<double>(hosts.at(v).size()));
        p.corr.push_back(nvx);
    }
    for (Panel& p : out.panels) {
        std::map<int, int> local;
        for (int i = 0; i < p.vertex_count(); ++i) local[p.corr[i]] = i;
        const int before = p.triangle_count();
        double orientation = 0.0;
        for (int k = 0; k < before; ++k) {
            const auto c = corners(p, k);
            orientation += signed_area(c[0], c[1], c[2]);
        }
        for (int t = g.triangle_count(); t < out.garment.triangle_count(); ++t) {
            if (out.garment.panel_ids[t] != p.id) continue;
            const Tri& tri = out.garment.triangles[t];
            p.triangles.push_back({local.at(tri[0]), local.at(tri[1]), local.at(tri[2])});
            const auto c = corners(p, p.triangle_count() - 1);
            const double area = signed_area(c[0], c[1], c[2]);
            if (!(std::abs(area) > kDegenerateArea) || (area > 0.0) != (orientation > 0.0)) {
                throw Error(ErrorCode::SelfIntersection, "extension strip folds over in the pattern",
                            "panel " + std::to_string(p.id));
            }
        }
        if (p.triangle_count() != before) {
            p.boundary = panel_boundary(p);
            if (!boundary_is_simple(p)) {
                throw Error(ErrorCode::SelfIntersection, "extended pattern boundary crosses itself",
                            "panel " + std::to_string(p.id));
            }
        }
    }

    // Seam chains that end on the grown boundary continue onto the strip.
    std::vector<SeamLine> extra;
    for (SeamLine& seam : out.seams) {
        const SeamLine original = seam;
        const std::size_t len = original.side_a.size();
        for (std::size_t k = 0; k < len; ++k) {
            const int a = original.side_a[k], b = original.side_b[k];
            if (!grown.count(a) || !grown.count(b)) continue;
            if (k + 1 == len) {
                seam.side_a.push_back(grown.at(a));
                seam.side_b.push_back(grown.at(b));
            } else if (k == 0) {
                seam.side_a.insert(seam.side_a.begin(), grown.at(a));
                seam.side_b.insert(seam.side_b.begin(), grown.at(b));
            } else {
                extra.push_back({{a, grown.at(a)}, {b, grown.at(b)}});
            }
        }
    }
    out.seams.insert(out.seams.end(), extra.begin(), extra.end());

    link_panels(out);
    out.scale_map = compute_document_scale_map(out);
    std::copy(doc.scale_map.matrices.begin(), doc.scale_map.matrices.end(), out.scale_map.matrices.begin());
    std::copy(doc.scale_map.designated_edges.begin(), doc.scale_map.designated_edges.end(),
              out.scale_map.designated_edges.begin());
    validate(out);
    result.doc = std::move(out);
    return result;
}

} // namespace tailor
