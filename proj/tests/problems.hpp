#pragma once

#include <random>
#include <vector>

#include "tailor/flatten.hpp"
#include "tailor/document.hpp"

namespace testing_support {

using namespace tailor;

// Jittered grid panel with random targets; used for solver property checks.
struct RandomProblem {
    StitchProblem problem;
    std::vector<LocalFrame> frames;
    std::vector<Vec2> initial;
};

inline RandomProblem random_problem(std::mt19937& rng, bool with_tangents) {
    std::uniform_int_distribution<int> size(2, 5);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    std::uniform_real_distribution<double> shear(-0.4, 0.4);
    const int nx = size(rng);
    const int ny = size(rng);
    RandomProblem rp;
    Panel panel;
    for (int r = 0; r <= ny; ++r) {
        for (int c = 0; c <= nx; ++c) panel.vertices.emplace_back(c + jitter(rng), r + jitter(rng));
    }
    for (int r = 0; r < ny; ++r) {
        for (int c = 0; c < nx; ++c) {
            const int v = r * (nx + 1) + c;
            panel.triangles.push_back({v, v + 1, v + nx + 2});
            panel.triangles.push_back({v, v + nx + 2, v + nx + 1});
        }
    }
    panel.boundary = panel_boundary(panel);
    rp.problem.vertex_count = panel.vertex_count();
    rp.problem.triangles = panel.triangles;
    rp.problem.designated_edges.assign(panel.triangles.size(), 0);
    for (std::size_t t = 0; t < panel.triangles.size(); ++t) {
        LocalFrame f = local_frame(corners(panel, static_cast<int>(t)));
        Mat2 distort;
        distort << scale(rng), shear(rng), 0.0, scale(rng);
        f.matrix = distort * f.matrix;
        rp.frames.push_back(f);
    }
    rp.initial = panel.vertices;
    for (Vec2& p : rp.initial) p += Vec2(jitter(rng), jitter(rng));
    rp.problem.fixed = {{0, panel.vertices[0]}, {nx, panel.vertices[nx]}};
    if (with_tangents) rp.problem.tangents = build_tangent_constraints(panel).constraints;
    return rp;
}

} // namespace testing_support
