#include "tailor/flatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "tailor/error.hpp"
#include "tailor/topology.hpp"

namespace tailor {

namespace {

constexpr double kSingularDet = 1e-12;
constexpr double kChordEps = 1e-9;

int edge_of(std::span<const int> edges, std::size_t i) {
    return edges.empty() ? 0 : edges[i];
}

} // namespace

IntrinsicScaleMap compute_intrinsic_scale_map(const Panel& panel, const Mesh3& garment, std::span<const int> designated_edges) {
    if (panel.garment_triangles.size() != panel.triangles.size()) {
        throw Error(ErrorCode::MismatchedTopology, "panel is not linked to its garment triangles", "panel " + std::to_string(panel.id));
    }
    IntrinsicScaleMap map;
    map.matrices.reserve(panel.triangles.size());
    for (std::size_t k = 0; k < panel.triangles.size(); ++k) {
        const int e = edge_of(designated_edges, k);
        const int g = panel.garment_triangles[k];
        LocalFrame drape;
        LocalFrame flat;
        try {
            drape = local_frame(corners(garment, g), e);
        } catch (const Error&) {
            throw Error(ErrorCode::DegenerateTriangle, "3D triangle is degenerate", "garment triangle " + std::to_string(g));
        }
        try {
            flat = local_frame(corners(panel, static_cast<int>(k)), e);
        } catch (const Error&) {
            throw Error(ErrorCode::DegenerateTriangle, "2D triangle is degenerate",
                        "panel " + std::to_string(panel.id) + " triangle " + std::to_string(k));
        }
        if (!(std::abs(flat.matrix.determinant()) > kSingularDet)) {
            throw Error(ErrorCode::SingularFrame, "2D frame is not invertible",
                        "panel " + std::to_string(panel.id) + " triangle " + std::to_string(k));
        }
        map.matrices.push_back(drape.matrix * flat.matrix.inverse());
        map.designated_edges.push_back(e);
    }
    return map;
}

IntrinsicScaleMap compute_document_scale_map(const GarmentDocument& doc) {
    IntrinsicScaleMap map;
    map.matrices.assign(doc.garment.triangles.size(), Mat2::Identity());
    map.designated_edges.assign(doc.garment.triangles.size(), 0);
    for (const Panel& p : doc.panels) {
        const auto local = compute_intrinsic_scale_map(p, doc.garment);
        for (std::size_t k = 0; k < p.garment_triangles.size(); ++k) {
            map.matrices[p.garment_triangles[k]] = local.matrices[k];
            map.designated_edges[p.garment_triangles[k]] = local.designated_edges[k];
        }
    }
    return map;
}

IntrinsicScaleMap panel_scale_map(const IntrinsicScaleMap& garment_map, const Panel& panel) {
    IntrinsicScaleMap map;
    for (int g : panel.garment_triangles) {
        map.matrices.push_back(garment_map.matrices[g]);
        map.designated_edges.push_back(garment_map.designated_edges.empty() ? 0 : garment_map.designated_edges[g]);
    }
    return map;
}

std::vector<LocalFrame> per_triangle_targets(const IntrinsicScaleMap& scale_map, const Panel& panel, const Mesh3& edited_garment) {
    if (scale_map.matrices.size() != panel.triangles.size() || panel.garment_triangles.size() != panel.triangles.size()) {
        throw Error(ErrorCode::MismatchedTopology, "scale map, panel and garment triangle counts differ",
                    "panel " + std::to_string(panel.id));
    }
    std::vector<LocalFrame> targets;
    targets.reserve(panel.triangles.size());
    for (std::size_t k = 0; k < panel.triangles.size(); ++k) {
        const int g = panel.garment_triangles[k];
        if (g < 0 || g >= edited_garment.triangle_count()) {
            throw Error(ErrorCode::MismatchedTopology, "edited garment lacks triangle " + std::to_string(g),
                        "panel " + std::to_string(panel.id));
        }
        const Mat2& m = scale_map.matrices[k];
        if (!(std::abs(m.determinant()) > kSingularDet)) {
            throw Error(ErrorCode::SingularFrame, "intrinsic scale matrix is singular",
                        "panel " + std::to_string(panel.id) + " triangle " + std::to_string(k));
        }
        const int e = edge_of(scale_map.designated_edges, k);
        const LocalFrame edited = local_frame(corners(edited_garment, g), e);
        LocalFrame target;
        target.edge = e;
        target.matrix = m.inverse() * edited.matrix;
        targets.push_back(target);
    }
    return targets;
}

TangentConstraints build_tangent_constraints(const Panel& panel) {
    TangentConstraints out;
    const auto& loop = panel.boundary;
    const std::size_t m = loop.size();
    if (m < 3) return out;
    for (std::size_t i = 0; i < m; ++i) {
        const int prev = loop[(i + m - 1) % m];
        const int next = loop[(i + 1) % m];
        const Vec2 chord = panel.vertices[next] - panel.vertices[prev];
        const double len = chord.norm();
        if (len < kChordEps) {
            out.skipped.push_back(loop[i]);
            continue;
        }
        out.constraints.push_back({loop[i], prev, next, chord / len});
    }
    return out;
}

double tangent_residual(const TangentConstraint& c, std::span<const Vec2> coords) {
    const Vec2 d = coords[c.next] - coords[c.prev];
    return d.x() * c.chord.y() - d.y() * c.chord.x();
}

double max_tangent_residual(std::span<const TangentConstraint> constraints, std::span<const Vec2> coords) {
    double worst = 0.0;
    for (const auto& c : constraints) worst = std::max(worst, std::abs(tangent_residual(c, coords)));
    return worst;
}

EdgeTargets edge_targets(const StitchProblem& problem, std::span<const LocalFrame> frames) {
    if (frames.size() != problem.triangles.size()) {
        throw Error(ErrorCode::MismatchedTopology, "one target frame per triangle required");
    }
    EdgeTargets out(frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const int e = frames[t].edge;
        Vec2 u = frames[t].matrix.col(0);
        Vec2 v = frames[t].matrix.col(1);
        if (problem.orientation < 0.0) {
            u.y() = -u.y();
            v.y() = -v.y();
        }
        std::array<Vec2, 3> pos;
        pos[e] = Vec2::Zero();
        pos[(e + 1) % 3] = u;
        pos[(e + 2) % 3] = v;
        for (int k = 0; k < 3; ++k) out[t][k] = pos[(k + 1) % 3] - pos[k];
    }
    return out;
}

std::vector<Mat2> fit_rotations(const StitchProblem& problem, const EdgeTargets& targets, std::span<const Vec2> coords) {
    std::vector<Mat2> rotations(problem.triangles.size());
    for (std::size_t t = 0; t < problem.triangles.size(); ++t) {
        const Tri& tri = problem.triangles[t];
        Mat2 s = Mat2::Zero();
        for (int k = 0; k < 3; ++k) {
            const Vec2 cur = coords[tri[(k + 1) % 3]] - coords[tri[k]];
            s += cur * targets[t][k].transpose();
        }
        // closed-form 2x2 polar rotation, reflections excluded
        const double angle = std::atan2(s(1, 0) - s(0, 1), s(0, 0) + s(1, 1));
        const double c = std::cos(angle);
        const double sn = std::sin(angle);
        rotations[t] << c, -sn,
                        sn, c;
    }
    return rotations;
}

namespace {

// Design matrix rows for the global step; unknowns are interleaved (x0, y0, x1, ...).
class GlobalSystem {
public:
    GlobalSystem(const StitchProblem& problem, const SolverConfig& config) : problem_(problem), config_(config) {
        const int n = 2 * problem.vertex_count;
        std::vector<Eigen::Triplet<double>> trip;
        int row = 0;
        for (const Tri& tri : problem.triangles) {
            for (int k = 0; k < 3; ++k) {
                const int i = tri[k];
                const int j = tri[(k + 1) % 3];
                for (int d = 0; d < 2; ++d) {
                    trip.emplace_back(row, 2 * j + d, 1.0);
                    trip.emplace_back(row, 2 * i + d, -1.0);
                    ++row;
                }
            }
        }
        const double s1 = std::sqrt(config.w1);
        for (const FixedVertex& f : problem.fixed) {
            for (int d = 0; d < 2; ++d) trip.emplace_back(row++, 2 * f.vertex + d, s1);
        }
        const double s2 = std::sqrt(config.w2);
        for (const TangentConstraint& c : problem.tangents) {
            trip.emplace_back(row, 2 * c.next, s2 * c.chord.y());
            trip.emplace_back(row, 2 * c.prev, -s2 * c.chord.y());
            trip.emplace_back(row, 2 * c.next + 1, -s2 * c.chord.x());
            trip.emplace_back(row, 2 * c.prev + 1, s2 * c.chord.x());
            ++row;
        }
        rows_ = row;
        a_.resize(rows_, n);
        a_.setFromTriplets(trip.begin(), trip.end());
        at_ = a_.transpose();
        Eigen::SparseMatrix<double> normal = at_ * a_;
        solver_.compute(normal);
        if (solver_.info() != Eigen::Success) {
            throw Error(ErrorCode::SolverFailure,
                        "normal matrix factorization failed (" + std::to_string(problem.fixed.size()) + " fixed vertices, " +
                            std::to_string(problem.vertex_count) + " vertices)");
        }
    }

    std::vector<Vec2> solve(const EdgeTargets& targets, std::span<const Mat2> rotations) const {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(rows_);
        int row = 0;
        for (std::size_t t = 0; t < problem_.triangles.size(); ++t) {
            for (int k = 0; k < 3; ++k) {
                const Vec2 g = rotations[t] * targets[t][k];
                b(row++) = g.x();
                b(row++) = g.y();
            }
        }
        const double s1 = std::sqrt(config_.w1);
        for (const FixedVertex& f : problem_.fixed) {
            b(row++) = s1 * f.position.x();
            b(row++) = s1 * f.position.y();
        }
        const Eigen::VectorXd rhs = at_ * b;
        const Eigen::VectorXd x = solver_.solve(rhs);
        if (solver_.info() != Eigen::Success || !x.allFinite()) {
            throw Error(ErrorCode::SolverFailure, "back substitution failed");
        }
        std::vector<Vec2> coords(static_cast<std::size_t>(problem_.vertex_count));
        for (int v = 0; v < problem_.vertex_count; ++v) coords[v] = Vec2(x(2 * v), x(2 * v + 1));
        return coords;
    }

private:
    const StitchProblem& problem_;
    SolverConfig config_;
    int rows_ = 0;
    Eigen::SparseMatrix<double> a_;
    Eigen::SparseMatrix<double> at_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

// Rotation taking each target triangle onto the polar factor of its
// deformation gradient from the current triangle. Inverted triangles keep
// their fitted rotation.
std::vector<Mat2> gradient_rotations(const StitchProblem& problem, const EdgeTargets& targets, std::span<const Vec2> coords,
                                     const std::vector<Mat2>& fitted) {
    std::vector<Mat2> out = fitted;
    for (std::size_t t = 0; t < problem.triangles.size(); ++t) {
        const Tri& tri = problem.triangles[t];
        Mat2 e;
        e.col(0) = coords[tri[1]] - coords[tri[0]];
        e.col(1) = coords[tri[2]] - coords[tri[0]];
        Mat2 g;
        g.col(0) = targets[t][0];
        g.col(1) = -targets[t][2];
        if (!(e.determinant() * g.determinant() > 0.0)) continue;
        const Mat2 f = e * g.inverse();
        const double angle = std::atan2(f(1, 0) - f(0, 1), f(0, 0) + f(1, 1));
        const double c = std::cos(angle);
        const double sn = std::sin(angle);
        out[t] << c, -sn,
                  sn, c;
    }
    return out;
}

void check_problem(const StitchProblem& problem, std::span<const Vec2> initial) {
    if (static_cast<int>(initial.size()) != problem.vertex_count) {
        throw Error(ErrorCode::MismatchedTopology, "initial guess size differs from vertex count");
    }
    for (const Vec2& p : initial) {
        if (!p.allFinite()) throw Error(ErrorCode::NonFiniteInput, "initial guess has non-finite coordinates");
    }
    std::set<int> fixed;
    for (const FixedVertex& f : problem.fixed) {
        if (f.vertex < 0 || f.vertex >= problem.vertex_count || !f.position.allFinite()) {
            throw Error(ErrorCode::NonFiniteInput, "fixed vertex " + std::to_string(f.vertex) + " invalid");
        }
        fixed.insert(f.vertex);
    }
    if (fixed.size() < 2) throw Error(ErrorCode::InvalidParameter, "stitching needs at least two fixed vertices");
}

} // namespace

std::vector<Vec2> global_step(const StitchProblem& problem, const EdgeTargets& targets, std::span<const Mat2> rotations,
                              const SolverConfig& config) {
    const GlobalSystem system(problem, config);
    return system.solve(targets, rotations);
}

double stitch_energy(const StitchProblem& problem, const EdgeTargets& targets, std::span<const Mat2> rotations,
                     std::span<const Vec2> coords, const SolverConfig& config) {
    double e = 0.0;
    for (std::size_t t = 0; t < problem.triangles.size(); ++t) {
        const Tri& tri = problem.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const Vec2 r = (coords[tri[(k + 1) % 3]] - coords[tri[k]]) - rotations[t] * targets[t][k];
            e += r.squaredNorm();
        }
    }
    for (const FixedVertex& f : problem.fixed) e += config.w1 * (coords[f.vertex] - f.position).squaredNorm();
    for (const TangentConstraint& c : problem.tangents) {
        const double r = tangent_residual(c, coords);
        e += config.w2 * r * r;
    }
    return e;
}

StitchResult stitch(const StitchProblem& problem, std::span<const LocalFrame> targets, std::span<const Vec2> initial_guess,
                    const SolverConfig& config) {
    if (!(config.w1 > 0.0) || !(config.w2 > 0.0) || config.max_iterations < 1) {
        throw Error(ErrorCode::InvalidParameter, "solver weights must be positive and max_iterations >= 1");
    }
    check_problem(problem, initial_guess);
    for (const LocalFrame& f : targets) {
        if (!f.matrix.allFinite()) throw Error(ErrorCode::NonFiniteInput, "target frame has non-finite entries");
    }
    const EdgeTargets goals = edge_targets(problem, targets);
    const GlobalSystem system(problem, config);

    StitchResult result;
    result.coords.assign(initial_guess.begin(), initial_guess.end());
    auto rotations = fit_rotations(problem, goals, result.coords);
    double energy = stitch_energy(problem, goals, rotations, result.coords, config);
    result.energy_trace.push_back(energy);

    if (energy > 1e-24) {
        // warm start from the polar rotations of the deformation gradients;
        // kept only if it beats the plain start so the trace stays monotone
        std::vector<Vec2> warm = system.solve(goals, gradient_rotations(problem, goals, result.coords, rotations));
        auto warm_rot = fit_rotations(problem, goals, warm);
        const double warm_energy = stitch_energy(problem, goals, warm_rot, warm, config);
        if (warm_energy < energy) {
            result.coords = std::move(warm);
            rotations = std::move(warm_rot);
            energy = warm_energy;
            result.energy_trace.push_back(energy);
            result.iterations = 1;
        }
    }

    // Anderson acceleration of the local/global map x -> G(x). An
    // extrapolated iterate is used only when it beats the plain step, so the
    // trace stays monotone; otherwise the history restarts.
    constexpr int kDepth = 6;
    const int n = 2 * problem.vertex_count;
    auto flat = [n](const std::vector<Vec2>& c) {
        Eigen::VectorXd v(n);
        for (std::size_t i = 0; i < c.size(); ++i) v.segment<2>(2 * static_cast<Eigen::Index>(i)) = c[i];
        return v;
    };
    auto unflat = [](const Eigen::VectorXd& v) {
        std::vector<Vec2> c(static_cast<std::size_t>(v.size() / 2));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = v.segment<2>(2 * static_cast<Eigen::Index>(i));
        return c;
    };
    std::vector<Eigen::VectorXd> hist_g, hist_f;

    for (int it = result.iterations; it < config.max_iterations; ++it) {
        if (energy <= 1e-24) {
            result.converged = true;
            break;
        }
        std::vector<Vec2> next = system.solve(goals, rotations);
        auto next_rot = fit_rotations(problem, goals, next);
        double next_energy = stitch_energy(problem, goals, next_rot, next, config);
        ++result.iterations;

        const Eigen::VectorXd g = flat(next);
        const Eigen::VectorXd f = g - flat(result.coords);
        if (!hist_f.empty()) {
            const int m = static_cast<int>(hist_f.size());
            Eigen::MatrixXd df(n, m), dg(n, m);
            for (int j = 0; j < m; ++j) {
                const Eigen::VectorXd& f1 = j + 1 < m ? hist_f[j + 1] : f;
                const Eigen::VectorXd& g1 = j + 1 < m ? hist_g[j + 1] : g;
                df.col(j) = f1 - hist_f[j];
                dg.col(j) = g1 - hist_g[j];
            }
            const Eigen::VectorXd gamma = df.colPivHouseholderQr().solve(f);
            if (gamma.allFinite()) {
                std::vector<Vec2> aa = unflat(g - dg * gamma);
                auto aa_rot = fit_rotations(problem, goals, aa);
                const double aa_energy = stitch_energy(problem, goals, aa_rot, aa, config);
                if (aa_energy < next_energy) {
                    next = std::move(aa);
                    next_rot = std::move(aa_rot);
                    next_energy = aa_energy;
                } else {
                    hist_f.clear();
                    hist_g.clear();
                }
            }
        }
        hist_f.push_back(f);
        hist_g.push_back(g);
        if (static_cast<int>(hist_f.size()) > kDepth + 1) {
            hist_f.erase(hist_f.begin());
            hist_g.erase(hist_g.begin());
        }

        const double change = (energy - next_energy) / std::max(energy, std::numeric_limits<double>::min());
        if (next_energy > energy) {
            // Round-off only; keep the better iterate so the trace stays monotone.
            result.converged = true;
            break;
        }
        result.coords = std::move(next);
        rotations = std::move(next_rot);
        energy = next_energy;
        result.energy_trace.push_back(energy);
        if (change < config.rel_tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::pair<int, int> select_fixed_edge(std::span<const Vec2> coords, std::span<const Tri> triangles) {
    double area = 0.0;
    Vec2 centroid = Vec2::Zero();
    for (const Tri& t : triangles) {
        const double a = std::abs(signed_area(coords[t[0]], coords[t[1]], coords[t[2]]));
        centroid += a * (coords[t[0]] + coords[t[1]] + coords[t[2]]) / 3.0;
        area += a;
    }
    if (area > 0.0) centroid /= area;
    const auto edges = unique_edges(triangles);
    std::pair<int, int> best = edges.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& e : edges) {
        const double d = (0.5 * (coords[e.first] + coords[e.second]) - centroid).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = e;
        }
    }
    return best;
}

std::vector<FixedVertex> pin_edge(std::pair<int, int> edge, std::span<const Vec2> coords, const StitchProblem& problem,
                                  const EdgeTargets& targets) {
    const auto [a, b] = edge;
    double length = 0.0;
    int count = 0;
    for (std::size_t t = 0; t < problem.triangles.size(); ++t) {
        const Tri& tri = problem.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int i = tri[k];
            const int j = tri[(k + 1) % 3];
            if ((i == a && j == b) || (i == b && j == a)) {
                length += targets[t][k].norm();
                ++count;
            }
        }
    }
    const Vec2 mid = 0.5 * (coords[a] + coords[b]);
    const Vec2 dir = (coords[b] - coords[a]).normalized();
    if (count == 0) return {{a, coords[a]}, {b, coords[b]}};
    length /= count;
    return {{a, mid - 0.5 * length * dir}, {b, mid + 0.5 * length * dir}};
}

namespace {

// Tutte embedding with the boundary on a circle of matching perimeter.
std::vector<Vec2> tutte_layout(const Mesh3& mesh) {
    const int n = mesh.vertex_count();
    const auto loops = boundary_loops(mesh.triangles);
    if (loops.empty()) throw Error(ErrorCode::NoBoundary, "sub-mesh has no boundary to flatten from");
    std::size_t outer = 0;
    for (std::size_t i = 1; i < loops.size(); ++i) {
        if (loops[i].size() > loops[outer].size()) outer = i;
    }
    const auto& loop = loops[outer];
    double perimeter = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        perimeter += (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    }
    const double radius = perimeter / (2.0 * std::numbers::pi);
    std::vector<Vec2> coords(static_cast<std::size_t>(n), Vec2::Zero());
    std::vector<bool> on_boundary(static_cast<std::size_t>(n), false);
    double walked = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const double angle = 2.0 * std::numbers::pi * walked / perimeter;
        coords[loop[i]] = radius * Vec2(std::cos(angle), std::sin(angle));
        on_boundary[loop[i]] = true;
        walked += (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    }
    const auto adj = vertex_neighbors(n, mesh.triangles);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
    for (int v = 0; v < n; ++v) {
        if (on_boundary[v] || adj[v].empty()) {
            trip.emplace_back(v, v, 1.0);
            rhs.row(v) = coords[v].transpose();
            continue;
        }
        trip.emplace_back(v, v, static_cast<double>(adj[v].size()));
        for (int w : adj[v]) {
            if (on_boundary[w]) rhs.row(v) += coords[w].transpose();
            else trip.emplace_back(v, w, -1.0);
        }
    }
    Eigen::SparseMatrix<double> lap(n, n);
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(lap);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "Tutte system factorization failed");
    const Eigen::MatrixXd x = lu.solve(rhs);
    for (int v = 0; v < n; ++v) coords[v] = Vec2(x(v, 0), x(v, 1));
    return coords;
}

double orientation_of(std::span<const Vec2> coords, std::span<const Tri> triangles) {
    double total = 0.0;
    for (const Tri& t : triangles) total += signed_area(coords[t[0]], coords[t[1]], coords[t[2]]);
    return total < 0.0 ? -1.0 : 1.0;
}

} // namespace

StitchResult flatten_uniform(const Mesh3& sub_mesh, std::optional<std::vector<Vec2>> initial_guess, const SolverConfig& config) {
    std::vector<Vec2> init = initial_guess ? std::move(*initial_guess) : tutte_layout(sub_mesh);
    if (static_cast<int>(init.size()) != sub_mesh.vertex_count()) {
        throw Error(ErrorCode::MismatchedTopology, "initial guess size differs from sub-mesh vertex count");
    }
    StitchProblem problem;
    problem.vertex_count = sub_mesh.vertex_count();
    problem.triangles = sub_mesh.triangles;
    problem.designated_edges.assign(sub_mesh.triangles.size(), 0);
    problem.orientation = orientation_of(init, sub_mesh.triangles);
    std::vector<LocalFrame> frames;
    frames.reserve(sub_mesh.triangles.size());
    for (int t = 0; t < sub_mesh.triangle_count(); ++t) frames.push_back(local_frame(corners(sub_mesh, t), 0));
    const EdgeTargets goals = edge_targets(problem, frames);
    problem.fixed = pin_edge(select_fixed_edge(init, sub_mesh.triangles), init, problem, goals);
    return stitch(problem, frames, init, config);
}

Mesh3 panel_submesh(const GarmentDocument& doc, const Panel& panel) {
    Mesh3 sub;
    sub.vertices.reserve(panel.corr.size());
    for (int g : panel.corr) sub.vertices.push_back(doc.garment.vertices[g]);
    sub.triangles = panel.triangles;
    sub.panel_ids.assign(panel.triangles.size(), panel.id);
    return sub;
}

UpdateResult update_pattern(const GarmentDocument& doc, const Mesh3& edited_garment, std::span<const int> affected,
                            AsapMode asap, const SolverConfig& config) {
    if (edited_garment.triangles.size() != doc.garment.triangles.size() ||
        edited_garment.vertices.size() != doc.garment.vertices.size()) {
        throw Error(ErrorCode::MismatchedTopology, "edited garment is not triangle-aligned with the document");
    }
    const std::set<int> touched(affected.begin(), affected.end());
    UpdateResult result;
    result.panels = doc.panels;
    for (Panel& panel : result.panels) {
        std::size_t hit = 0;
        for (int g : panel.garment_triangles) hit += touched.count(g);
        if (hit == 0) continue;

        const bool use_asap = asap == AsapMode::On || (asap == AsapMode::Auto && hit == panel.garment_triangles.size());
        const IntrinsicScaleMap local = panel_scale_map(doc.scale_map, panel);
        const auto targets = per_triangle_targets(local, panel, edited_garment);

        StitchProblem problem;
        problem.vertex_count = panel.vertex_count();
        problem.triangles = panel.triangles;
        problem.designated_edges = local.designated_edges;
        problem.orientation = orientation_of(panel.vertices, panel.triangles);
        if (use_asap) problem.tangents = build_tangent_constraints(panel).constraints;
        const EdgeTargets goals = edge_targets(problem, targets);
        problem.fixed = pin_edge(select_fixed_edge(panel.vertices, panel.triangles), panel.vertices, problem, goals);

        bool moved = false;
        for (int g : panel.corr) {
            if (edited_garment.vertices[g] != doc.garment.vertices[g]) {
                moved = true;
                break;
            }
        }
        PanelTrace trace{panel.id, use_asap, {}};
        if (!moved) {
            // untouched drape: the stored pattern is the solution
            const auto rot = fit_rotations(problem, goals, panel.vertices);
            trace.energy_trace.push_back(stitch_energy(problem, goals, rot, panel.vertices, config));
        } else {
            StitchResult solved = stitch(problem, targets, panel.vertices, config);
            panel.vertices = std::move(solved.coords);
            trace.energy_trace = std::move(solved.energy_trace);
        }
        result.traces.push_back(std::move(trace));
    }
    return result;
}

} // namespace tailor
