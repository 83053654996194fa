#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <map>
#include <set>

#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/fixtures.hpp"
#include "tailor/io.hpp"
#include "tailor/topology.hpp"

using namespace tailor;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::ValidationError;
}

std::vector<int> panel_triangles(const Mesh3& g, int pid) {
    std::vector<int> out;
    for (int t = 0; t < g.triangle_count(); ++t) {
        if (g.panel_ids[t] == pid) out.push_back(t);
    }
    return out;
}

double radius_about_y(const Vec3& p, const Vec3& centre) { return std::hypot(p.x() - centre.x(), p.z() - centre.z()); }

// Largest distance from a reflected garment vertex to its nearest vertex.
double reflection_self_distance(const GarmentDocument& doc) {
    double worst = 0.0;
    for (const Vec3& p : doc.garment.vertices) {
        const Vec3 r = doc.symmetry->reflect_point(p);
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& q : doc.garment.vertices) best = std::min(best, (q - r).norm());
        worst = std::max(worst, best);
    }
    return worst;
}

fixtures::CylinderSpec left_sleeve() {
    fixtures::CylinderSpec s;
    s.center = Vec3(-12.0, 0.0, 0.0);
    return s;
}

Camera front_camera(const Vec3& look_at) {
    Camera c;
    c.eye = look_at + Vec3(0, 0, 40.0);
    c.target = look_at;
    c.up = Vec3::UnitY();
    return c;
}

const std::vector<Vec2> kMiddleSketch{Vec2(350, 300), Vec2(450, 300)};

} // namespace

// ---------------------------------------------------------------- scale

TEST(ScaleRegion, PerpendicularScalesDistanceToAxis) {
    const auto doc = fixtures::cylinder({});
    Region region{panel_triangles(doc.garment, 0), {}};
    const auto out = scale_region(doc, region, AxisMode::Perpendicular, 1.2);
    for (int v = 0; v < out.garment.vertex_count(); ++v) {
        EXPECT_NEAR(radius_about_y(out.garment.vertices[v], Vec3::Zero()), 6.0, 1e-9);
        EXPECT_EQ(out.garment.vertices[v].y(), doc.garment.vertices[v].y());
    }
    EXPECT_EQ(out.affected.size(), doc.garment.triangles.size());
}

TEST(ScaleRegion, AlongStretchesFromLowEnd) {
    const auto doc = fixtures::cylinder({});
    Region region{panel_triangles(doc.garment, 0), {}};
    const auto out = scale_region(doc, region, AxisMode::Along, 1.5);
    for (int v = 0; v < out.garment.vertex_count(); ++v) {
        EXPECT_NEAR(out.garment.vertices[v].y(), 1.5 * doc.garment.vertices[v].y(), 1e-9);
        EXPECT_NEAR(radius_about_y(out.garment.vertices[v], Vec3::Zero()), 5.0, 1e-9);
    }
}

TEST(ScaleRegion, AnchorsSetTheFixedEnd) {
    const auto doc = fixtures::cylinder({});
    Region region{panel_triangles(doc.garment, 0), {}};
    const int cols = 9;
    for (int c = 0; c < cols; ++c) region.anchors.push_back(4 * cols + c); // top row, y = 10
    const auto out = scale_region(doc, region, AxisMode::Along, 0.8);
    for (int v = 0; v < out.garment.vertex_count(); ++v) {
        const double y = doc.garment.vertices[v].y();
        EXPECT_NEAR(out.garment.vertices[v].y(), 10.0 + 0.8 * (y - 10.0), 1e-9);
    }
}

TEST(ScaleRegion, BlendBandUsesHalfwayFactor) {
    const auto doc = fixtures::cylinder({});
    // rows 0..1 of 4 (y in [0, 5]); row 2 at y = 5 touches unedited triangles
    Region region;
    for (int t = 0; t < 32; ++t) region.triangles.push_back(t);
    const double f = 1.4;
    const auto out = scale_region(doc, region, AxisMode::Along, f);
    for (int v = 0; v < out.garment.vertex_count(); ++v) {
        const double y = doc.garment.vertices[v].y();
        double expect = y;
        if (y < 4.9) expect = f * y;
        else if (y < 5.1) expect = y + 0.5 * (f - 1.0) * y;
        EXPECT_NEAR(out.garment.vertices[v].y(), expect, 1e-9) << "vertex " << v;
    }
}

TEST(ScaleRegion, FactorOneIsBitwiseIdentity) {
    const auto doc = fixtures::cylinder({});
    Region region{panel_triangles(doc.garment, 0), {}};
    const auto out = scale_region(doc, region, AxisMode::Along, 1.0);
    EXPECT_TRUE(out.affected.empty());
    for (int v = 0; v < doc.garment.vertex_count(); ++v) EXPECT_EQ(out.garment.vertices[v], doc.garment.vertices[v]);
}

TEST(ScaleRegion, Errors) {
    auto doc = fixtures::cylinder({});
    Region all{panel_triangles(doc.garment, 0), {}};
    for (double f : {0.1, 10.0, 0.05, std::nan("")}) {
        EXPECT_EQ(code_of([&] { (void)scale_region(doc, all, AxisMode::Along, f); }), ErrorCode::InvalidFactor);
    }
    Region apart{{0, 40}, {}};
    EXPECT_EQ(code_of([&] { (void)scale_region(doc, apart, AxisMode::Along, 1.2); }), ErrorCode::DisconnectedRegion);
    Region bad{{999}, {}};
    EXPECT_EQ(code_of([&] { (void)scale_region(doc, bad, AxisMode::Along, 1.2); }), ErrorCode::InvalidIndex);
    doc.body.skeleton.clear();
    EXPECT_EQ(code_of([&] { (void)scale_region(doc, all, AxisMode::Along, 1.2); }), ErrorCode::NoNearbyBone);
}

TEST(ScaleRegion, AffectedSetCoversEveryMovedTriangle) {
    const auto doc = fixtures::split_cylinder({}, 2);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> factor(0.5, 2.0);
    std::uniform_int_distribution<int> pick(0, doc.garment.triangle_count() - 1);
    for (int trial = 0; trial < 30; ++trial) {
        // grow a connected region inside one panel by adjacency
        const int seed = pick(rng);
        const int pid = doc.garment.panel_ids[seed];
        std::set<int> region{seed};
        std::uniform_int_distribution<int> grow(1, 12);
        const int target = grow(rng);
        for (int step = 0; step < 50 && static_cast<int>(region.size()) < target; ++step) {
            for (int t = 0; t < doc.garment.triangle_count(); ++t) {
                if (region.count(t) || doc.garment.panel_ids[t] != pid) continue;
                int shared = 0;
                for (int r : region) {
                    int common = 0;
                    for (int a : doc.garment.triangles[t]) {
                        for (int b : doc.garment.triangles[r]) common += a == b;
                    }
                    shared = std::max(shared, common);
                }
                if (shared == 2) {
                    region.insert(t);
                    break;
                }
            }
        }
        const Region r{{region.begin(), region.end()}, {}};
        const auto mode = trial % 2 ? AxisMode::Along : AxisMode::Perpendicular;
        const auto out = scale_region(doc, r, mode, factor(rng));
        const std::set<int> affected(out.affected.begin(), out.affected.end());
        for (int t = 0; t < doc.garment.triangle_count(); ++t) {
            bool moved = false;
            for (int v : doc.garment.triangles[t]) moved |= out.garment.vertices[v] != doc.garment.vertices[v];
            EXPECT_EQ(moved, affected.count(t) > 0) << "triangle " << t;
        }
        GarmentDocument edited = doc;
        edited.garment = out.garment;
        EXPECT_NO_THROW(validate(edited)); // seam copies still coincide
    }
}

// ---------------------------------------------------------------- seams

TEST(MoveSeam, FixedTopRescalesBothParts) {
    const auto doc = fixtures::split_cylinder({}, 2);
    const int top_vertex = doc.panels[1].corr.back(); // upper panel, top row
    const auto out = move_seam(doc, 0, AxisMode::Along, -1.0, BoundaryRef{top_vertex, {}});
    for (int v = 0; v < doc.garment.vertex_count(); ++v) {
        const double y = doc.garment.vertices[v].y();
        const bool lower = v < doc.panels[0].vertex_count();
        const double expect = lower ? y * 4.0 / 5.0 : 10.0 - (10.0 - y) * 6.0 / 5.0;
        EXPECT_NEAR(out.garment.vertices[v].y(), expect, 1e-9) << "vertex " << v;
    }
}

TEST(MoveSeam, FreeFarSideTranslates) {
    const auto doc = fixtures::split_cylinder({}, 2);
    const auto out = move_seam(doc, 0, AxisMode::Along, 1.5, std::nullopt);
    for (int v = 0; v < doc.garment.vertex_count(); ++v) {
        const double y = doc.garment.vertices[v].y();
        const bool lower = v < doc.panels[0].vertex_count();
        EXPECT_NEAR(out.garment.vertices[v].y(), lower ? y * 6.5 / 5.0 : y + 1.5, 1e-9);
    }
}

TEST(MoveSeam, PerpendicularWidensSeamRing) {
    const auto doc = fixtures::split_cylinder({}, 2);
    const auto out = move_seam(doc, 0, AxisMode::Perpendicular, 0.5, std::nullopt);
    for (int v = 0; v < doc.garment.vertex_count(); ++v) {
        const double y = doc.garment.vertices[v].y();
        const bool lower = v < doc.panels[0].vertex_count();
        const double expect = lower ? 5.0 + 0.5 * y / 5.0 : 5.5;
        EXPECT_NEAR(radius_about_y(out.garment.vertices[v], Vec3::Zero()), expect, 1e-9);
    }
}

TEST(MoveSeam, Errors) {
    const auto doc = fixtures::split_cylinder({}, 2);
    EXPECT_EQ(code_of([&] { (void)move_seam(doc, 0, AxisMode::Along, 5.0, std::nullopt); }), ErrorCode::OffsetOutOfRange);
    EXPECT_EQ(code_of([&] { (void)move_seam(doc, 0, AxisMode::Along, -6.0, std::nullopt); }), ErrorCode::OffsetOutOfRange);
    EXPECT_EQ(code_of([&] { (void)move_seam(doc, 7, AxisMode::Along, 1.0, std::nullopt); }), ErrorCode::SeamNotFound);
    EXPECT_EQ(code_of([&] { (void)move_seam(doc, 0, AxisMode::Perpendicular, -5.0, std::nullopt); }),
              ErrorCode::OffsetOutOfRange);
}

// ---------------------------------------------------------------- collisions

TEST(Collisions, PushedToClearanceAlongNormal) {
    BodyModel body;
    body.mesh = fixtures::wall(50.0, 0.0);
    Mesh3 g;
    g.vertices = {Vec3(1.0, 2.0, -0.5), Vec3(3.0, 1.0, 0.7)};
    const std::vector<int> candidates{0, 1};
    const auto moved = resolve_body_collisions(g, body, candidates);
    ASSERT_EQ(moved, std::vector<int>{0});
    EXPECT_NEAR(g.vertices[0].z(), 0.2, 1e-12);
    EXPECT_NEAR((g.vertices[0] - Vec3(1.0, 2.0, -0.5)).norm(), 0.7, 1e-12);
    EXPECT_EQ(g.vertices[1], Vec3(3.0, 1.0, 0.7));
}

TEST(Collisions, EquidistantTieGoesToLowestTriangle) {
    BodyModel body;
    body.mesh.vertices = {Vec3(-5, -5, 0), Vec3(5, -5, 0), Vec3(0, 5, 0)};
    body.mesh.triangles = {{0, 1, 2}, {0, 2, 1}}; // same triangle, +z then -z
    Mesh3 g;
    g.vertices = {Vec3(0, 0, -0.5)};
    const std::vector<int> c{0};
    EXPECT_EQ(resolve_body_collisions(g, body, c).size(), 1u);
    EXPECT_NEAR(g.vertices[0].z(), 0.2, 1e-12);
    std::swap(body.mesh.triangles[0], body.mesh.triangles[1]);
    g.vertices = {Vec3(0, 0, -0.5)};
    EXPECT_TRUE(resolve_body_collisions(g, body, c).empty());
}

// ---------------------------------------------------------------- cut

TEST(Cut, BothSidesClosesRingAroundSleeve) {
    const auto doc = fixtures::cylinder({});
    const auto cam = front_camera(Vec3(0, 5.3, 0));
    const auto out = cut_by_sketch(doc, kMiddleSketch, cam, true, DiscardSide::Right);
    const auto& g = out.doc.garment;
    double lo = 1e9;
    for (const Vec3& p : g.vertices) lo = std::min(lo, p.y());
    EXPECT_NEAR(lo, 5.3, 1e-9);
    const double chord = 2.0 * 5.0 * std::sin(std::numbers::pi / 8.0);
    EXPECT_NEAR(mesh_area(g), 8.0 * chord * 4.7, 1e-9);
    EXPECT_NEAR(panel_area(out.doc.panels[0]), 8.0 * chord * 4.7, 1e-9);
    // new boundary: every vertex at the cut height or above it on a grid row
    for (int v = 0; v < g.vertex_count(); ++v) {
        const double y = g.vertices[v].y();
        EXPECT_TRUE(std::abs(y - 5.3) < 1e-9 || std::abs(y - 7.5) < 1e-12 || std::abs(y - 10.0) < 1e-12) << y;
    }
}

TEST(Cut, OldPatternVerticesAreBitwiseAndNewOnesInterpolate) {
    const auto doc = fixtures::cylinder({.pattern_scale = 1.7});
    const auto cam = front_camera(Vec3(0, 6.1, 0));
    const auto out = cut_by_sketch(doc, kMiddleSketch, cam, true, DiscardSide::None);
    ASSERT_EQ(out.doc.panels.size(), 2u);
    EXPECT_EQ(out.doc.panels[1].id, 1);
    const Panel& old = doc.panels[0];
    std::map<int, int> old_local; // new garment vertex -> old panel vertex
    for (int j = 0; j < old.vertex_count(); ++j) {
        if (out.vertex_map[old.corr[j]] >= 0) old_local[out.vertex_map[old.corr[j]]] = j;
    }
    double area = 0.0;
    int fresh = 0;
    for (const Panel& p : out.doc.panels) {
        area += panel_area(p);
        for (int i = 0; i < p.vertex_count(); ++i) {
            const int g = p.corr[i];
            auto it = old_local.find(g);
            if (it != old_local.end()) {
                EXPECT_EQ(p.vertices[i], old.vertices[it->second]);
            } else {
                // on the plane y = 6.1; the pattern is 1.7x the drape
                ++fresh;
                EXPECT_NEAR(out.doc.garment.vertices[g].y(), 6.1, 1e-9);
                EXPECT_NEAR(p.vertices[i].y(), 1.7 * 6.1, 1e-9);
            }
        }
    }
    EXPECT_EQ(fresh, 2 * (9 + 8)); // vertical and diagonal edges, one copy per side
    EXPECT_NEAR(area, panel_area(old), 1e-6 * panel_area(old));
}

TEST(Cut, SplitsSideSeamIntoTwoRuns) {
    const auto doc = fixtures::cylinder({});
    const auto out = cut_by_sketch(doc, kMiddleSketch, front_camera(Vec3(0, 5.3, 0)), true, DiscardSide::None);
    ASSERT_EQ(out.doc.seams.size(), 2u);
    for (const SeamLine& s : out.doc.seams) {
        for (std::size_t k = 0; k < s.side_a.size(); ++k) {
            EXPECT_LT((out.doc.garment.vertices[s.side_a[k]] - out.doc.garment.vertices[s.side_b[k]]).norm(), 1e-12);
        }
    }
    EXPECT_EQ(out.doc.seams[0].side_a.size() + out.doc.seams[1].side_a.size(), 5u + 2u);
}

TEST(Cut, MissesAndOpenSlits) {
    const auto doc = fixtures::cylinder({});
    const auto cam = front_camera(Vec3(0, 5.3, 0));
    const std::vector<Vec2> corner{Vec2(0, 10), Vec2(60, 10)};
    EXPECT_EQ(code_of([&] { (void)cut_by_sketch(doc, corner, cam, true, DiscardSide::Left); }), ErrorCode::NoIntersection);
    EXPECT_EQ(code_of([&] { (void)cut_by_sketch(doc, kMiddleSketch, cam, false, DiscardSide::Right); }),
              ErrorCode::OpenLoop);
    const std::vector<Vec2> one{Vec2(1, 1)};
    EXPECT_EQ(code_of([&] { (void)cut_by_sketch(doc, one, cam, true, DiscardSide::Left); }), ErrorCode::InvalidParameter);
}

TEST(Cut, OneSidedAcrossFlatPanel) {
    const auto doc = fixtures::flat_panel(10, 10, 4, 4);
    const auto cam = front_camera(Vec3(5, 5.3, 0));
    const std::vector<Vec2> across{Vec2(0, 300), Vec2(800, 300)};
    const auto out = cut_by_sketch(doc, across, cam, false, DiscardSide::Right);
    EXPECT_NEAR(mesh_area(out.doc.garment), 10.0 * 4.7, 1e-9);
    const auto left = cut_by_sketch(doc, across, cam, false, DiscardSide::Left);
    EXPECT_NEAR(mesh_area(left.doc.garment), 10.0 * 5.3, 1e-9);
}

TEST(Cut, SnapsNearVertexCrossings) {
    const auto doc = fixtures::cylinder({});
    const auto out = cut_by_sketch(doc, kMiddleSketch, front_camera(Vec3(0, 5.0 + 2e-5, 0)), true, DiscardSide::Right);
    // the crossing lands on row 2 itself: no new vertices
    EXPECT_EQ(out.doc.garment.vertex_count(), 3 * 9);
    EXPECT_TRUE(out.affected.empty());
}

// ---------------------------------------------------------------- shorten

TEST(Shorten, GridBottomRunByDistance) {
    const auto doc = fixtures::flat_panel(5, 5, 5, 5);
    const auto out = shorten(doc, BoundaryRef{0, 5}, 2.5);
    double lo = 1e9;
    for (const Vec3& p : out.doc.garment.vertices) lo = std::min(lo, p.y());
    EXPECT_NEAR(lo, 2.5, 1e-12);
    EXPECT_NEAR(mesh_area(out.doc.garment), 5.0 * 2.5, 1e-9);
    EXPECT_NEAR(panel_area(out.doc.panels[0]), 5.0 * 2.5, 1e-9);
}

TEST(Shorten, IsolineSitsAtRequestedDistance) {
    const auto doc = fixtures::cylinder({});
    const auto weld = weld_map(doc.garment.vertex_count(), doc.seams);
    const auto run = resolve_boundary(doc, BoundaryRef{0, {}});
    const auto dist = geodesic_from_boundary(doc.garment, run, weld);
    for (const auto& line : extract_isoline(doc.garment, dist, 3.7)) {
        for (const auto& p : line.points) {
            EXPECT_NEAR((1.0 - p.t) * dist[p.a] + p.t * dist[p.b], 3.7, 1e-12);
        }
    }
    const auto out = shorten(doc, BoundaryRef{0, {}}, 3.7);
    double lo = 1e9;
    for (const Vec3& p : out.doc.garment.vertices) lo = std::min(lo, p.y());
    EXPECT_NEAR(lo, 3.7, 1e-12);
}

TEST(Shorten, IdentityAndErrors) {
    const auto doc = fixtures::flat_panel(5, 5, 5, 5);
    const auto same = shorten(doc, BoundaryRef{0, {}}, 0.0);
    EXPECT_EQ(document_hash(same.doc), document_hash(doc));
    EXPECT_EQ(code_of([&] { (void)shorten(doc, BoundaryRef{0, 5}, 100.0); }), ErrorCode::EmptyIsoline);
    EXPECT_EQ(code_of([&] { (void)shorten(doc, BoundaryRef{14, {}}, 1.0); }), ErrorCode::NoBoundary);
    EXPECT_EQ(code_of([&] { (void)shorten(doc, BoundaryRef{0, {}}, -1.0); }), ErrorCode::InvalidParameter);
}

// ---------------------------------------------------------------- extend

TEST(Extend, PlanarHemGrowsInPlane) {
    const auto doc = fixtures::flat_panel(10, 4, 5, 2, 2.0);
    const auto out = extend(doc, BoundaryRef{0, 5}, 1.5, false);
    const auto& g = out.doc.garment;
    for (int v = doc.garment.vertex_count(); v < g.vertex_count(); ++v) {
        EXPECT_NEAR(g.vertices[v].y(), -1.5, 1e-12);
        EXPECT_NEAR(g.vertices[v].z(), 0.0, 1e-12);
    }
    EXPECT_NEAR(mesh_area(g) - mesh_area(doc.garment), 15.0, 1e-9);
    // the pattern is drawn at twice the drape size
    EXPECT_NEAR(panel_area(out.doc.panels[0]) - panel_area(doc.panels[0]), 4.0 * 15.0, 1e-9);
    for (int t : out.affected) {
        const auto c = corners(g, t);
        EXPECT_LT((triangle_normal(c[0], c[1], c[2]) - Vec3::UnitZ()).norm(), 1e-6);
    }
    EXPECT_EQ(out.affected.size(), 10u);
}

TEST(Extend, CollisionPushesStripOutOfBody) {
    auto doc = fixtures::flat_panel(10, 4, 5, 2);
    doc.body.mesh.vertices = {Vec3(-50, -1, -50), Vec3(50, -1, -50), Vec3(50, -1, 50), Vec3(-50, -1, 50)};
    doc.body.mesh.triangles = {{0, 2, 1}, {0, 3, 2}}; // faces +y
    const auto out = extend(doc, BoundaryRef{0, 5}, 1.5);
    for (int v = doc.garment.vertex_count(); v < out.doc.garment.vertex_count(); ++v) {
        EXPECT_NEAR(out.doc.garment.vertices[v].y(), -0.8, 1e-12);
    }
    for (int i = doc.panels[0].vertex_count(); i < out.doc.panels[0].vertex_count(); ++i) {
        EXPECT_NEAR(out.doc.panels[0].vertices[i].y(), -0.8, 1e-12);
    }
    EXPECT_FALSE(out.warnings.empty());
}

TEST(Extend, SleeveHemContinuesSideSeam) {
    const auto doc = fixtures::cylinder({});
    const auto out = extend(doc, BoundaryRef{0, {}}, 2.0, false);
    for (int v = doc.garment.vertex_count(); v < out.doc.garment.vertex_count(); ++v) {
        EXPECT_NEAR(out.doc.garment.vertices[v].y(), -2.0, 1e-12);
        EXPECT_NEAR(radius_about_y(out.doc.garment.vertices[v], Vec3::Zero()), 5.0, 1e-12);
    }
    EXPECT_EQ(out.doc.seams[0].side_a.size(), 6u);
    for (int t : out.affected) {
        // each strip quad lies in the plane of the facet above it
        const auto c = corners(out.doc.garment, t);
        const Vec3 n = triangle_normal(c[0], c[1], c[2]);
        EXPECT_NEAR(n.y(), 0.0, 1e-12);
    }
}

TEST(Extend, IdentityAndErrors) {
    const auto doc = fixtures::flat_panel(5, 5, 5, 5);
    EXPECT_EQ(document_hash(extend(doc, BoundaryRef{0, {}}, 0.0).doc), document_hash(doc));
    EXPECT_EQ(code_of([&] { (void)extend(doc, BoundaryRef{14, {}}, 1.0); }), ErrorCode::NoBoundary);
    EXPECT_EQ(code_of([&] { (void)extend(doc, BoundaryRef{0, {}}, -2.0); }), ErrorCode::InvalidParameter);
}

// ---------------------------------------------------------------- mirror

TEST(Mirror, EditOfMirrorIsOriginal) {
    const auto doc = fixtures::sleeves(left_sleeve());
    EditOp scale;
    scale.kind = EditKind::ScaleRegion;
    scale.region.triangles = {0, 1, 2, 3, 4, 5};
    scale.region.anchors = {0, 1};
    scale.factor = 1.3;
    EXPECT_EQ(mirror_edit(mirror_edit(scale, doc), doc), scale);
    EXPECT_NE(mirror_edit(scale, doc), scale);

    EditOp hem;
    hem.kind = EditKind::Extend;
    hem.boundary = BoundaryRef{0, 3};
    hem.distance = 1.0;
    EXPECT_EQ(mirror_edit(mirror_edit(hem, doc), doc), hem);

    EditOp cut;
    cut.kind = EditKind::Cut;
    cut.camera = front_camera(Vec3(-12, 5.3, 0));
    cut.sketch = {Vec2(350, 300), Vec2(450, 300.5)};
    cut.discard = DiscardSide::Right;
    const EditOp back = mirror_edit(mirror_edit(cut, doc), doc);
    EXPECT_EQ(back.discard, cut.discard);
    for (std::size_t i = 0; i < cut.sketch.size(); ++i) EXPECT_NEAR((back.sketch[i] - cut.sketch[i]).norm(), 0.0, 1e-9);
    EXPECT_NEAR((back.camera.eye - cut.camera.eye).norm(), 0.0, 1e-12);
}

TEST(Mirror, MirroredScaleIsSymmetric) {
    const auto doc = fixtures::sleeves(left_sleeve());
    EditOp op;
    op.kind = EditKind::ScaleRegion;
    op.region.triangles = panel_triangles(doc.garment, 0);
    op.mode = AxisMode::Perpendicular;
    op.factor = 1.25;
    const auto out = apply_edit(doc, op, true);
    EXPECT_LT(reflection_self_distance(out.doc), 1e-9);
    const auto lone = apply_edit(doc, op, false);
    EXPECT_GT(reflection_self_distance(lone.doc), 0.1);
}

TEST(Mirror, MirroredCutAndExtendAreSymmetric) {
    const auto doc = fixtures::sleeves(left_sleeve());
    EditOp cut;
    cut.kind = EditKind::Cut;
    cut.camera = front_camera(Vec3(-12, 5.3, 0));
    cut.sketch = kMiddleSketch;
    cut.discard = DiscardSide::Right;
    const auto a = apply_edit(doc, cut, true);
    EXPECT_LT(reflection_self_distance(a.doc), 1e-9);

    EditOp hem;
    hem.kind = EditKind::Extend;
    hem.boundary = BoundaryRef{0, {}};
    hem.distance = 1.0;
    const auto b = apply_edit(doc, hem, true);
    EXPECT_LT(reflection_self_distance(b.doc), 1e-9);
}

TEST(Mirror, SelfMirroredEditAppliesOnce) {
    const auto doc = fixtures::sleeves(left_sleeve());
    const int front_vertex = doc.panels[2].corr[0];
    EditOp op;
    op.kind = EditKind::Shorten;
    op.boundary = BoundaryRef{front_vertex, {}};
    op.distance = 1.0;
    const auto mirrored = apply_edit(doc, op, true);
    const auto plain = apply_edit(doc, op, false);
    EXPECT_EQ(document_hash(mirrored.doc), document_hash(plain.doc));
}

TEST(Mirror, Errors) {
    const auto cyl = fixtures::cylinder({});
    EditOp op;
    op.kind = EditKind::ScaleRegion;
    op.region.triangles = {0};
    op.factor = 1.2;
    EXPECT_EQ(code_of([&] { (void)apply_edit(cyl, op, true); }), ErrorCode::NoSymmetryDeclared);
    auto doc = fixtures::sleeves(left_sleeve());
    doc.symmetry->pairs = {{2, 2}};
    EXPECT_EQ(code_of([&] { (void)mirror_edit(op, doc); }), ErrorCode::UnpairedPanel);
}

// ---------------------------------------------------------------- apply

TEST(Apply, RecordsHistoryAndLeavesOtherPanelsAlone) {
    const auto doc = fixtures::sleeves(left_sleeve());
    EditOp op;
    op.kind = EditKind::ScaleRegion;
    op.region.triangles = panel_triangles(doc.garment, 0);
    op.mode = AxisMode::Along;
    op.factor = 1.2;
    const auto out = apply_edit(doc, op);
    ASSERT_EQ(out.doc.history.size(), 1u);
    EXPECT_EQ(out.doc.history[0].op, op);
    EXPECT_FALSE(out.doc.history[0].mirror);
    EXPECT_EQ(out.doc.history[0].hash, document_hash(out.doc));
    EXPECT_EQ(out.doc.panels[1].vertices, doc.panels[1].vertices);
    EXPECT_EQ(out.doc.panels[2].vertices, doc.panels[2].vertices);
    EXPECT_NE(out.doc.panels[0].vertices, doc.panels[0].vertices);
    ASSERT_EQ(out.traces.size(), 1u);
    EXPECT_EQ(out.traces[0].panel_id, 0);
}

TEST(Apply, ReplayIsDeterministic) {
    const auto doc = fixtures::split_cylinder({}, 2);
    EditOp op;
    op.kind = EditKind::MoveSeam;
    op.seam = 0;
    op.offset = -0.7;
    const auto a = apply_edit(doc, op);
    const auto b = apply_edit(doc, op);
    EXPECT_EQ(save_document(a.doc), save_document(b.doc));
}

TEST(Apply, TopologyEditsReportNewTriangles) {
    const auto doc = fixtures::cylinder({});
    EditOp op;
    op.kind = EditKind::Extend;
    op.boundary = BoundaryRef{0, {}};
    op.distance = 1.0;
    const auto out = apply_edit(doc, op);
    EXPECT_EQ(out.affected.size(), 16u);
    EXPECT_EQ(out.affected.front(), doc.garment.triangle_count());
}
