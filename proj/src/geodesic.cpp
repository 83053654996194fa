#include "tailor/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>

#include "tailor/error.hpp"
#include "tailor/topology.hpp"

namespace tailor {

std::vector<double> geodesic_from_boundary(const Mesh3& mesh, std::span<const int> sources, std::span<const int> weld) {
    if (sources.empty()) throw Error(ErrorCode::EmptySource, "no source vertices");
    const int n = mesh.vertex_count();
    for (int s : sources) {
        if (s < 0 || s >= n) {
            throw Error(ErrorCode::InvalidIndex, "source vertex " + std::to_string(s) + " out of range",
                        "vertex " + std::to_string(s));
        }
    }

    auto adj = vertex_neighbors(n, mesh.triangles);
    std::vector<std::vector<int>> welded(static_cast<std::size_t>(n));
    if (!weld.empty()) {
        std::map<int, std::vector<int>> groups;
        for (int v = 0; v < n; ++v) groups[weld[v]].push_back(v);
        for (const auto& [r, members] : groups) {
            for (int a : members) {
                for (int b : members) {
                    if (a != b) welded[a].push_back(b);
                }
            }
        }
    }

    std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int s : sources) {
        dist[s] = 0.0;
        heap.emplace(0.0, s);
    }
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (int w : adj[v]) {
            const double nd = d + (mesh.vertices[w] - mesh.vertices[v]).norm();
            if (nd < dist[w]) {
                dist[w] = nd;
                heap.emplace(nd, w);
            }
        }
        for (int w : welded[v]) {
            if (d < dist[w]) {
                dist[w] = d;
                heap.emplace(d, w);
            }
        }
    }
    return dist;
}

std::vector<Polyline> extract_isoline(const Mesh3& mesh, std::span<const double> dist, double level) {
    if (!(level > 0.0)) throw Error(ErrorCode::InvalidParameter, "iso level must be positive");

    auto above = [&](int v) { return dist[v] >= level; };
    auto point_on = [&](int a, int b) {
        // orient so that a is below and b above
        if (above(a)) std::swap(a, b);
        IsoPoint p;
        p.a = a;
        p.b = b;
        p.t = (level - dist[a]) / (dist[b] - dist[a]);
        p.position = (1.0 - p.t) * mesh.vertices[a] + p.t * mesh.vertices[b];
        return p;
    };
    using EdgeKey = std::pair<int, int>;
    auto key = [](int a, int b) { return EdgeKey{std::min(a, b), std::max(a, b)}; };

    // per triangle: the two crossed edges
    std::vector<std::pair<EdgeKey, EdgeKey>> segments;
    std::map<EdgeKey, std::vector<int>> edge_segments;
    std::map<EdgeKey, IsoPoint> points;
    for (const Tri& t : mesh.triangles) {
        std::vector<EdgeKey> crossed;
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            if (!std::isfinite(dist[a]) || !std::isfinite(dist[b])) continue;
            if (above(a) != above(b)) {
                crossed.push_back(key(a, b));
                points.emplace(key(a, b), point_on(a, b));
            }
        }
        if (crossed.size() == 2) {
            const int id = static_cast<int>(segments.size());
            segments.emplace_back(crossed[0], crossed[1]);
            edge_segments[crossed[0]].push_back(id);
            edge_segments[crossed[1]].push_back(id);
        }
    }
    if (segments.empty()) {
        throw Error(ErrorCode::EmptyIsoline, "no edge brackets distance " + std::to_string(level));
    }

    std::vector<bool> used(segments.size(), false);
    auto other_segment = [&](const EdgeKey& edge, int current) {
        for (int s : edge_segments[edge]) {
            if (s != current && !used[s]) return s;
        }
        return -1;
    };
    auto other_end = [&](int seg, const EdgeKey& from) {
        return segments[seg].first == from ? segments[seg].second : segments[seg].first;
    };

    std::vector<Polyline> lines;
    auto walk = [&](int seg, EdgeKey start) {
        Polyline line;
        line.points.push_back(points[start]);
        EdgeKey at = start;
        while (seg >= 0) {
            used[seg] = true;
            at = other_end(seg, at);
            if (at == start) {
                line.closed = true;
                break;
            }
            line.points.push_back(points[at]);
            seg = other_segment(at, seg);
        }
        lines.push_back(std::move(line));
    };
    // open chains start at edges crossed by a single segment
    for (const auto& [edge, segs] : edge_segments) {
        if (segs.size() == 1 && !used[segs[0]]) walk(segs[0], edge);
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s]) walk(static_cast<int>(s), segments[s].first);
    }
    return lines;
}

} // namespace tailor
