#include "tailor/fixtures.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "tailor/flatten.hpp"
#include "tailor/io.hpp"

namespace tailor::fixtures {

namespace {

// Grid panel over a (cols x rows) vertex lattice; returns triangles in
// lattice indices, counter-clockwise in (column, row) space.
std::vector<Tri> lattice_triangles(int cols, int rows) {
    std::vector<Tri> tris;
    for (int r = 0; r + 1 < rows; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
            const int v = r * cols + c;
            tris.push_back({v, v + 1, v + cols + 1});
            tris.push_back({v, v + cols + 1, v + cols});
        }
    }
    return tris;
}

// Appends a panel whose vertices are fresh garment vertices.
void add_panel(GarmentDocument& doc, int id, const std::vector<Vec3>& positions, const std::vector<Vec2>& pattern,
               const std::vector<Tri>& tris) {
    const int base = doc.garment.vertex_count();
    Panel p;
    p.id = id;
    p.vertices = pattern;
    p.triangles = tris;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        doc.garment.vertices.push_back(positions[i]);
        p.corr.push_back(base + static_cast<int>(i));
    }
    for (const Tri& t : tris) {
        doc.garment.triangles.push_back({base + t[0], base + t[1], base + t[2]});
        doc.garment.panel_ids.push_back(id);
    }
    p.boundary = panel_boundary(p);
    doc.panels.push_back(std::move(p));
}

struct Sleeve {
    std::vector<Vec3> positions;
    std::vector<Vec2> pattern;
    std::vector<Tri> tris;
    int cols = 0;
};

Sleeve sleeve_lattice(const CylinderSpec& s, int row_begin, int row_end) {
    Sleeve out;
    out.cols = s.segments + 1;
    const double chord = 2.0 * s.radius * std::sin(std::numbers::pi / s.segments);
    const double dy = s.height / s.rows;
    for (int r = row_begin; r <= row_end; ++r) {
        for (int c = 0; c <= s.segments; ++c) {
            const double theta = 2.0 * std::numbers::pi * (c % s.segments) / s.segments;
            out.positions.push_back(s.center + Vec3(s.radius * std::sin(theta), r * dy, s.radius * std::cos(theta)));
            out.pattern.push_back(s.pattern_scale * Vec2(c * chord, r * dy));
        }
    }
    out.tris = lattice_triangles(out.cols, row_end - row_begin + 1);
    return out;
}

SeamLine side_seam(int base, int cols, int rows) {
    SeamLine seam;
    for (int r = 0; r < rows; ++r) {
        seam.side_a.push_back(base + r * cols);
        seam.side_b.push_back(base + r * cols + cols - 1);
    }
    return seam;
}

Bone axis_bone(const CylinderSpec& s, const std::string& name) {
    return {name, s.center - Vec3(0, 1.0, 0), s.center + Vec3(0, s.height + 1.0, 0)};
}

} // namespace

GarmentDocument flat_panel(double width, double height, int nx, int ny, double pattern_scale) {
    GarmentDocument doc;
    std::vector<Vec3> pos;
    std::vector<Vec2> pat;
    for (int r = 0; r <= ny; ++r) {
        for (int c = 0; c <= nx; ++c) {
            const Vec3 p(width * c / nx, height * r / ny, 0.0);
            pos.push_back(p);
            pat.push_back(pattern_scale * Vec2(p.x(), p.y()));
        }
    }
    add_panel(doc, 0, pos, pat, lattice_triangles(nx + 1, ny + 1));
    doc.body.skeleton.push_back({"spine", Vec3(-1.0, -1.0, -2.0), Vec3(-1.0, height + 1.0, -2.0)});
    prepare_document(doc);
    return doc;
}

GarmentDocument cylinder(const CylinderSpec& spec) {
    GarmentDocument doc;
    const Sleeve s = sleeve_lattice(spec, 0, spec.rows);
    add_panel(doc, 0, s.positions, s.pattern, s.tris);
    doc.seams.push_back(side_seam(0, s.cols, spec.rows + 1));
    doc.body.skeleton.push_back(axis_bone(spec, "arm"));
    prepare_document(doc);
    return doc;
}

GarmentDocument split_cylinder(const CylinderSpec& spec, int split_row) {
    GarmentDocument doc;
    const Sleeve lower = sleeve_lattice(spec, 0, split_row);
    const Sleeve upper = sleeve_lattice(spec, split_row, spec.rows);
    add_panel(doc, 0, lower.positions, lower.pattern, lower.tris);
    const int upper_base = doc.garment.vertex_count();
    add_panel(doc, 1, upper.positions, upper.pattern, upper.tris);

    SeamLine join;
    for (int c = 0; c < lower.cols; ++c) {
        join.side_a.push_back(split_row * lower.cols + c);
        join.side_b.push_back(upper_base + c);
    }
    doc.seams.push_back(join);
    doc.seams.push_back(side_seam(0, lower.cols, split_row + 1));
    doc.seams.push_back(side_seam(upper_base, upper.cols, spec.rows - split_row + 1));
    doc.body.skeleton.push_back(axis_bone(spec, "arm"));
    prepare_document(doc);
    return doc;
}

GarmentDocument sleeves(const CylinderSpec& left) {
    GarmentDocument doc;
    Symmetry sym;
    sym.point = Vec3::Zero();
    sym.normal = Vec3::UnitX();

    const Sleeve l = sleeve_lattice(left, 0, left.rows);
    add_panel(doc, 0, l.positions, l.pattern, l.tris);
    doc.seams.push_back(side_seam(0, l.cols, left.rows + 1));

    // mirror image: reflect positions and pattern, reverse winding
    Sleeve r = l;
    for (auto& p : r.positions) p = sym.reflect_point(p);
    for (auto& q : r.pattern) q.x() = -q.x();
    for (auto& t : r.tris) std::swap(t[1], t[2]);
    const int right_base = doc.garment.vertex_count();
    add_panel(doc, 1, r.positions, r.pattern, r.tris);
    doc.seams.push_back(side_seam(right_base, r.cols, left.rows + 1));

    // front panel straddling the plane, in z = -(radius + 10)
    const double half = 6.0;
    const double z = -(left.radius + 10.0);
    std::vector<Vec3> fpos;
    std::vector<Vec2> fpat;
    const int n = 4;
    for (int row = 0; row <= n; ++row) {
        for (int c = 0; c <= n; ++c) {
            const Vec3 p(-half + 2.0 * half * c / n, left.center.y() + left.height * row / n, z);
            fpos.push_back(p);
            fpat.push_back(Vec2(p.x(), p.y()));
        }
    }
    // diagonals mirrored about the plane so the triangulation is symmetric;
    // winding chosen so the normal faces -z (away from the body centre)
    std::vector<Tri> ftris;
    const int cols = n + 1;
    for (int row = 0; row < n; ++row) {
        for (int c = 0; c < n; ++c) {
            const int v = row * cols + c;
            if (2 * c < n) {
                ftris.push_back({v, v + cols + 1, v + 1});
                ftris.push_back({v, v + cols, v + cols + 1});
            } else {
                ftris.push_back({v, v + cols, v + 1});
                ftris.push_back({v + 1, v + cols, v + cols + 1});
            }
        }
    }
    for (auto& q : fpat) q.x() = -q.x();
    add_panel(doc, 2, fpos, fpat, ftris);

    sym.pairs = {{0, 1}, {2, 2}};
    doc.symmetry = sym;
    doc.body.skeleton.push_back(axis_bone(left, "left_arm"));
    Bone right_bone = axis_bone(left, "right_arm");
    right_bone.a = sym.reflect_point(right_bone.a);
    right_bone.b = sym.reflect_point(right_bone.b);
    doc.body.skeleton.push_back(right_bone);
    doc.body.skeleton.push_back({"spine", Vec3(0, left.center.y() - 1.0, z + 8.0), Vec3(0, left.center.y() + left.height + 1.0, z + 8.0)});
    prepare_document(doc);
    return doc;
}

GarmentDocument yoke(double size, int cells) {
    GarmentDocument doc;
    std::vector<Vec3> pos;
    std::vector<Vec2> pat;
    for (int r = 0; r <= cells; ++r) {
        for (int c = 0; c <= cells; ++c) {
            const Vec3 p(-0.5 * size + size * c / cells, -0.5 * size + size * r / cells, 0.0);
            pos.push_back(p);
            pat.push_back(Vec2(p.x(), p.y()));
        }
    }
    add_panel(doc, 0, pos, pat, lattice_triangles(cells + 1, cells + 1));
    doc.body.skeleton.push_back({"neck", Vec3(0, 0, -5.0), Vec3(0, 0, 5.0)});
    prepare_document(doc);
    return doc;
}

GarmentDocument cap(double sphere_radius, double opening_deg, int rings, int sectors) {
    GarmentDocument doc;
    std::vector<Vec3> pos;
    pos.push_back(Vec3(0, sphere_radius, 0));
    const double opening = opening_deg * std::numbers::pi / 180.0;
    for (int r = 1; r <= rings; ++r) {
        const double phi = opening * r / rings;
        for (int s = 0; s < sectors; ++s) {
            const double theta = 2.0 * std::numbers::pi * s / sectors;
            pos.push_back(sphere_radius * Vec3(std::sin(phi) * std::sin(theta), std::cos(phi), std::sin(phi) * std::cos(theta)));
        }
    }
    std::vector<Tri> tris;
    auto ring = [&](int r, int s) { return 1 + (r - 1) * sectors + ((s % sectors) + sectors) % sectors; };
    for (int s = 0; s < sectors; ++s) tris.push_back({0, ring(1, s), ring(1, s + 1)});
    for (int r = 1; r < rings; ++r) {
        for (int s = 0; s < sectors; ++s) {
            tris.push_back({ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)});
            tris.push_back({ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)});
        }
    }
    // outward winding
    for (Tri& t : tris) {
        const Vec3 n = (pos[t[1]] - pos[t[0]]).cross(pos[t[2]] - pos[t[0]]);
        if (n.dot(pos[t[0]] + pos[t[1]] + pos[t[2]]) < 0.0) std::swap(t[1], t[2]);
    }
    Mesh3 sub;
    sub.vertices = pos;
    sub.triangles = tris;
    StitchResult flat = flatten_uniform(sub, std::nullopt, SolverConfig{1000.0, 1000.0, 200, 1e-12});
    if (flat.coords.size() == pos.size()) {
        double total = 0.0;
        for (const Tri& t : tris) total += signed_area(flat.coords[t[0]], flat.coords[t[1]], flat.coords[t[2]]);
        if (total < 0.0) {
            for (auto& q : flat.coords) q.x() = -q.x();
        }
    }
    add_panel(doc, 0, pos, flat.coords, tris);
    doc.body.skeleton.push_back({"axis", Vec3(0, -1.0, 0), Vec3(0, sphere_radius + 1.0, 0)});
    prepare_document(doc);
    return doc;
}

Mesh3 wall(double half_size, double offset) {
    Mesh3 m;
    m.vertices = {Vec3(-half_size, -half_size, offset), Vec3(half_size, -half_size, offset),
                  Vec3(half_size, half_size, offset), Vec3(-half_size, half_size, offset)};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

} // namespace tailor::fixtures
