#pragma once

// Independent reference computations used by the tests and the acceptance
// suite. Nothing here shares code with the solver it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tailor/flatten.hpp"
#include "tailor/geometry.hpp"

namespace oracle {

using tailor::Mat2;
using tailor::Tri;
using tailor::Vec2;

// Dense least squares for the global step: rows are written out directly from
// the energy (edge differences, weighted pins, weighted tangent residuals)
// and solved with column-pivoted QR.
inline std::vector<Vec2> dense_global_step(const tailor::StitchProblem& p, const tailor::EdgeTargets& targets,
                                           std::span<const Mat2> rotations, double w1, double w2) {
    const int n = 2 * p.vertex_count;
    const int rows = static_cast<int>(6 * p.triangles.size() + 2 * p.fixed.size() + p.tangents.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    int r = 0;
    for (std::size_t t = 0; t < p.triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int i = p.triangles[t][k];
            const int j = p.triangles[t][(k + 1) % 3];
            const Vec2 g = rotations[t] * targets[t][k];
            a(r, 2 * j) = 1.0;
            a(r, 2 * i) = -1.0;
            b(r++) = g.x();
            a(r, 2 * j + 1) = 1.0;
            a(r, 2 * i + 1) = -1.0;
            b(r++) = g.y();
        }
    }
    for (const auto& f : p.fixed) {
        a(r, 2 * f.vertex) = std::sqrt(w1);
        b(r++) = std::sqrt(w1) * f.position.x();
        a(r, 2 * f.vertex + 1) = std::sqrt(w1);
        b(r++) = std::sqrt(w1) * f.position.y();
    }
    for (const auto& c : p.tangents) {
        const double s = std::sqrt(w2);
        a(r, 2 * c.next) += s * c.chord.y();
        a(r, 2 * c.prev) -= s * c.chord.y();
        a(r, 2 * c.next + 1) -= s * c.chord.x();
        a(r, 2 * c.prev + 1) += s * c.chord.x();
        ++r;
    }
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    std::vector<Vec2> out(static_cast<std::size_t>(p.vertex_count));
    for (int v = 0; v < p.vertex_count; ++v) out[v] = Vec2(x(2 * v), x(2 * v + 1));
    return out;
}

// All-pairs shortest paths over an explicit edge list.
inline std::vector<std::vector<double>> floyd_warshall(int n, const std::vector<std::pair<int, int>>& edges,
                                                       const std::vector<double>& lengths) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        d[a][b] = std::min(d[a][b], lengths[e]);
        d[b][a] = std::min(d[b][a], lengths[e]);
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
    }
    return d;
}

// Symmetric Hausdorff distance between two closed polygons, sampled densely
// along each edge.
inline double polygon_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b, int samples = 16) {
    auto seg_dist = [](const Vec2& p, const Vec2& s0, const Vec2& s1) {
        const Vec2 d = s1 - s0;
        const double len2 = d.squaredNorm();
        double t = len2 > 0.0 ? (p - s0).dot(d) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return (p - (s0 + t * d)).norm();
    };
    auto one_way = [&](const std::vector<Vec2>& x, const std::vector<Vec2>& y) {
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Vec2& p0 = x[i];
            const Vec2& p1 = x[(i + 1) % x.size()];
            for (int s = 0; s < samples; ++s) {
                const Vec2 p = p0 + (p1 - p0) * (static_cast<double>(s) / samples);
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < y.size(); ++j) best = std::min(best, seg_dist(p, y[j], y[(j + 1) % y.size()]));
                worst = std::max(worst, best);
            }
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

} // namespace oracle
