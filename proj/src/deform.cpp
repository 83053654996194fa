#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "edit_internal.hpp"
#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/topology.hpp"

namespace tailor {

using detail::vertex_panels;

BoneFrame nearest_bone(const BodyModel& body, const Mesh3& garment, std::span<const int> vertices, double max_distance) {
    BoneFrame best;
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < body.skeleton.size(); ++b) {
        const Bone& bone = body.skeleton[b];
        const Vec3 d = bone.b - bone.a;
        if (d.norm() <= 1e-12 || vertices.empty()) continue;
        double sum = 0.0;
        for (int v : vertices) sum += point_segment_distance(garment.vertices[v], bone.a, bone.b);
        const double mean = sum / static_cast<double>(vertices.size());
        if (mean < best_mean) {
            best_mean = mean;
            best.bone = static_cast<int>(b);
            best.origin = bone.a;
            best.axis = d.normalized();
        }
    }
    if (best.bone < 0 || best_mean > max_distance) {
        throw Error(ErrorCode::NoNearbyBone, "no skeleton bone near the edited region", "skeleton");
    }
    return best;
}

Deformation scale_region(const GarmentDocument& doc, const Region& region, AxisMode mode, double factor) {
    return scale_region(doc, doc.garment, region, mode, factor);
}

Deformation scale_region(const GarmentDocument& doc, const Mesh3& garment, const Region& region, AxisMode mode,
                         double factor) {
    if (!std::isfinite(factor) || factor <= 0.1 || factor >= 10.0) {
        throw Error(ErrorCode::InvalidFactor, "scale factor must lie in (0.1, 10)", "factor");
    }
    if (region.triangles.empty()) throw Error(ErrorCode::InvalidParameter, "region has no triangles", "region");
    for (int t : region.triangles) {
        if (t < 0 || t >= garment.triangle_count()) {
            throw Error(ErrorCode::InvalidIndex, "region triangle out of range", "triangle " + std::to_string(t));
        }
    }
    for (int v : region.anchors) detail::check_vertex(garment, v);

    // One edge-connected piece per panel.
    std::set<int> panels;
    for (int t : region.triangles) panels.insert(garment.panel_ids[t]);
    for (int pid : panels) {
        std::vector<Tri> tris;
        for (int t : region.triangles) {
            if (garment.panel_ids[t] == pid) tris.push_back(garment.triangles[t]);
        }
        const auto comp = triangle_components(tris);
        if (*std::max_element(comp.begin(), comp.end()) > 0) {
            throw Error(ErrorCode::DisconnectedRegion, "region is not edge-connected", "panel " + std::to_string(pid));
        }
    }

    Deformation out{garment, {}};
    if (factor == 1.0) return out;

    const auto weld = detail::doc_weld(doc);
    const int n = garment.vertex_count();
    std::vector<char> in_region(n, 0), in_triangle(n, 0), outside(n, 0), anchored(n, 0);
    std::vector<char> region_tri(garment.triangles.size(), 0);
    for (int t : region.triangles) region_tri[t] = 1;
    std::vector<int> members;
    for (std::size_t t = 0; t < garment.triangles.size(); ++t) {
        for (int v : garment.triangles[t]) {
            if (region_tri[t]) {
                in_region[weld[v]] = 1;
                if (!in_triangle[v]) members.push_back(v);
                in_triangle[v] = 1;
            } else {
                outside[weld[v]] = 1;
            }
        }
    }
    for (int v : region.anchors) anchored[weld[v]] = 1;
    std::sort(members.begin(), members.end());

    const BoneFrame bone = nearest_bone(doc.body, garment, members);
    auto axial = [&](const Vec3& p) { return (p - bone.origin).dot(bone.axis); };

    double fixed_end = std::numeric_limits<double>::infinity();
    if (!region.anchors.empty()) {
        double sum = 0.0;
        for (int v : region.anchors) sum += axial(garment.vertices[v]);
        fixed_end = sum / static_cast<double>(region.anchors.size());
    } else {
        for (int v : members) fixed_end = std::min(fixed_end, axial(garment.vertices[v]));
    }

    for (int v = 0; v < n; ++v) {
        const int r = weld[v];
        if (!in_region[r] || anchored[r]) continue;
        const double f = outside[r] ? 0.5 * (1.0 + factor) : factor;
        const Vec3& p = garment.vertices[v];
        const double s = axial(p);
        if (mode == AxisMode::Along) {
            out.garment.vertices[v] = p + ((f - 1.0) * (s - fixed_end)) * bone.axis;
        } else {
            const Vec3 c = bone.origin + s * bone.axis;
            out.garment.vertices[v] = c + f * (p - c);
        }
    }
    out.affected = detail::changed_triangles(garment, out.garment);
    return out;
}

Deformation move_seam(const GarmentDocument& doc, int seam, AxisMode mode, double offset,
                      const std::optional<BoundaryRef>& fixed_boundary) {
    return move_seam(doc, doc.garment, seam, mode, offset, fixed_boundary);
}

Deformation move_seam(const GarmentDocument& doc, const Mesh3& garment, int seam, AxisMode mode, double offset,
                      const std::optional<BoundaryRef>& fixed_boundary) {
    if (seam < 0 || seam >= static_cast<int>(doc.seams.size())) {
        throw Error(ErrorCode::SeamNotFound, "no such seam", "seam " + std::to_string(seam));
    }
    if (!std::isfinite(offset)) throw Error(ErrorCode::InvalidParameter, "offset must be finite", "offset");
    Deformation out{garment, {}};
    if (offset == 0.0) return out;

    const SeamLine& line = doc.seams[seam];
    const auto owner = vertex_panels(garment);
    const int panel_a = owner[line.side_a.front()];
    const int panel_b = owner[line.side_b.front()];
    if (panel_a == panel_b) {
        throw Error(ErrorCode::InvalidParameter, "seam joins a panel to itself", "seam " + std::to_string(seam));
    }
    const auto weld = detail::doc_weld(doc);

    const BoneFrame bone = nearest_bone(doc.body, garment, line.side_a);
    auto axial = [&](const Vec3& p) { return (p - bone.origin).dot(bone.axis); };
    auto radial = [&](const Vec3& p) {
        const Vec3 d = p - bone.origin;
        return Vec3(d - d.dot(bone.axis) * bone.axis);
    };

    double seam_pos = 0.0;
    for (int v : line.side_a) seam_pos += axial(garment.vertices[v]);
    seam_pos /= static_cast<double>(line.side_a.size());

    auto far_end = [&](int pid) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
        int count = 0;
        for (int v = 0; v < garment.vertex_count(); ++v) {
            if (owner[v] != pid) continue;
            const double s = axial(garment.vertices[v]);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            sum += s;
            ++count;
        }
        return sum / count < seam_pos ? lo : hi;
    };
    double far_a = far_end(panel_a);
    double far_b = far_end(panel_b);
    bool rescale_b = false;
    if (fixed_boundary) {
        const auto loop = resolve_boundary(doc, *fixed_boundary);
        const int pid = owner[fixed_boundary->vertex];
        if (pid != panel_a && pid != panel_b) {
            throw Error(ErrorCode::InvalidParameter, "fixed boundary is not next to the seam", "fixed_boundary");
        }
        double sum = 0.0;
        for (int v : loop) sum += axial(garment.vertices[v]);
        const double pos = sum / static_cast<double>(loop.size());
        if (pid == panel_b) {
            far_b = pos;
            rescale_b = true;
        } else {
            far_a = pos;
        }
    }

    if (mode == AxisMode::Along) {
        const double extent = std::min(std::abs(seam_pos - far_a), std::abs(seam_pos - far_b));
        if (std::abs(offset) >= extent) {
            throw Error(ErrorCode::OffsetOutOfRange, "offset exceeds the shorter adjacent part",
                        "seam " + std::to_string(seam));
        }
    } else {
        double min_radius = std::numeric_limits<double>::infinity();
        for (int v : line.side_a) min_radius = std::min(min_radius, radial(garment.vertices[v]).norm());
        if (offset <= -min_radius) {
            throw Error(ErrorCode::OffsetOutOfRange, "offset collapses the seam onto the bone",
                        "seam " + std::to_string(seam));
        }
    }

    std::vector<char> on_seam(garment.vertices.size(), 0);
    for (int v : line.side_a) on_seam[weld[v]] = 1;
    for (int v : line.side_b) on_seam[weld[v]] = 1;

    auto weight = [&](int v) {
        if (on_seam[weld[v]]) return 1.0;
        const bool is_a = owner[v] == panel_a;
        if (!is_a && !rescale_b) return 1.0;
        const double far = is_a ? far_a : far_b;
        const double denom = seam_pos - far;
        if (std::abs(denom) < 1e-12) return 0.0;
        return std::clamp((axial(garment.vertices[v]) - far) / denom, 0.0, 1.0);
    };

    // New position per welded group, taken from its copy in panel A or B.
    std::vector<int> source(garment.vertices.size(), -1);
    for (int v = 0; v < garment.vertex_count(); ++v) {
        if ((owner[v] == panel_a || owner[v] == panel_b) && source[weld[v]] < 0) source[weld[v]] = v;
    }
    for (int v = 0; v < garment.vertex_count(); ++v) {
        const int s = source[weld[v]];
        if (s < 0) continue;
        const double lambda = weight(s);
        if (lambda == 0.0) continue;
        const Vec3& p = garment.vertices[v];
        if (mode == AxisMode::Along) {
            out.garment.vertices[v] = p + (lambda * offset) * bone.axis;
        } else {
            const Vec3 r = radial(garment.vertices[s]);
            const double len = r.norm();
            if (len > 1e-12) out.garment.vertices[v] = p + (lambda * offset / len) * r;
        }
    }
    out.affected = detail::changed_triangles(garment, out.garment);
    return out;
}

std::vector<int> resolve_body_collisions(Mesh3& garment, const BodyModel& body, std::span<const int> candidates,
                                         double clearance) {
    std::vector<int> moved;
    const Mesh3& mesh = body.mesh;
    if (mesh.triangles.empty()) return moved;
    for (int v : candidates) {
        detail::check_vertex(garment, v);
        const Vec3 p = garment.vertices[v];
        double best = std::numeric_limits<double>::infinity();
        Vec3 q = Vec3::Zero(), normal = Vec3::Zero();
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto c = corners(mesh, static_cast<int>(t));
            const Vec3 cp = closest_point_on_triangle(p, c[0], c[1], c[2]);
            const double d = (p - cp).norm();
            if (d < best - 1e-12) {
                best = d;
                q = cp;
                normal = triangle_normal(c[0], c[1], c[2]);
            }
        }
        if (normal.squaredNorm() == 0.0) continue;
        const double depth = (p - q).dot(normal);
        if (depth < 0.0) {
            garment.vertices[v] = p + (clearance - depth) * normal;
            moved.push_back(v);
        }
    }
    return moved;
}

} // namespace tailor
