#include "tailor/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tailor/error.hpp"

namespace tailor {

namespace {

int find_root(std::vector<int>& parent, int v) {
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}

} // namespace

std::vector<int> weld_map(int vertex_count, std::span<const SeamLine> seams) {
    std::vector<int> parent(static_cast<std::size_t>(vertex_count));
    std::iota(parent.begin(), parent.end(), 0);
    for (const SeamLine& seam : seams) {
        const std::size_t n = std::min(seam.side_a.size(), seam.side_b.size());
        for (std::size_t k = 0; k < n; ++k) {
            const int a = seam.side_a[k];
            const int b = seam.side_b[k];
            if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) continue;
            const int ra = find_root(parent, a);
            const int rb = find_root(parent, b);
            if (ra == rb) continue;
            // smallest index wins so representatives are stable
            if (ra < rb) parent[rb] = ra;
            else parent[ra] = rb;
        }
    }
    std::vector<int> rep(parent.size());
    for (int v = 0; v < vertex_count; ++v) rep[v] = find_root(parent, v);
    return rep;
}

std::vector<std::vector<int>> boundary_loops(std::span<const Tri> triangles) {
    std::map<std::pair<int, int>, int> count;
    for (const Tri& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::map<int, int> next;
    for (const Tri& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            if (count[{std::min(a, b), std::max(a, b)}] == 1) next[a] = b;
        }
    }
    std::vector<std::vector<int>> loops;
    std::map<int, bool> used;
    for (const auto& [start, unused] : next) {
        if (used[start]) continue;
        std::vector<int> loop;
        int v = start;
        while (!used[v]) {
            used[v] = true;
            loop.push_back(v);
            auto it = next.find(v);
            if (it == next.end()) break;
            v = it->second;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<std::vector<int>> vertex_neighbors(int vertex_count, std::span<const Tri> triangles) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertex_count));
    for (const Tri& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            adj[t[e]].push_back(t[(e + 1) % 3]);
            adj[t[(e + 1) % 3]].push_back(t[e]);
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::vector<int> triangle_components(std::span<const Tri> triangles) {
    const int n = static_cast<int>(triangles.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::map<std::pair<int, int>, int> owner;
    for (int i = 0; i < n; ++i) {
        for (int e = 0; e < 3; ++e) {
            const int a = triangles[i][e];
            const int b = triangles[i][(e + 1) % 3];
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto [it, inserted] = owner.emplace(key, i);
            if (!inserted) {
                const int ra = find_root(parent, it->second);
                const int rb = find_root(parent, i);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::map<int, int> label;
    for (int i = 0; i < n; ++i) {
        const int r = find_root(parent, i);
        auto [it, inserted] = label.emplace(r, static_cast<int>(label.size()));
        comp[i] = it->second;
    }
    return comp;
}

std::vector<std::pair<int, int>> unique_edges(std::span<const Tri> triangles) {
    std::vector<std::pair<int, int>> edges;
    std::map<std::pair<int, int>, int> seen;
    for (const Tri& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            if (seen.emplace(std::make_pair(std::min(a, b), std::max(a, b)), 0).second) {
                edges.emplace_back(a, b);
            }
        }
    }
    return edges;
}

std::vector<GarmentBoundaryLoop> garment_boundary_loops(const Mesh3& garment, std::span<const int> weld) {
    auto rep = [&](int v) { return weld.empty() ? v : weld[v]; };
    std::map<std::pair<int, int>, int> count;
    for (const Tri& t : garment.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = rep(t[e]);
            const int b = rep(t[(e + 1) % 3]);
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    }
    // welded half-edge -> garment half-edge
    std::map<int, GarmentBoundaryLoop::Edge> next;
    std::map<int, int> indegree;
    for (int ti = 0; ti < garment.triangle_count(); ++ti) {
        const Tri& t = garment.triangles[ti];
        for (int e = 0; e < 3; ++e) {
            const int a = t[e];
            const int b = t[(e + 1) % 3];
            const int ra = rep(a);
            const int rb = rep(b);
            if (count[{std::min(ra, rb), std::max(ra, rb)}] != 1) continue;
            if (next.count(ra)) {
                throw Error(ErrorCode::ValidationError, "garment boundary is not manifold at vertex " + std::to_string(ra),
                            "vertex " + std::to_string(ra));
            }
            next[ra] = {a, b, ti};
            ++indegree[rb];
        }
    }
    std::vector<GarmentBoundaryLoop> loops;
    std::map<int, bool> used;
    auto trace = [&](int start) {
        GarmentBoundaryLoop loop;
        int v = start;
        while (!used[v]) {
            used[v] = true;
            loop.vertices.push_back(v);
            auto it = next.find(v);
            if (it == next.end()) {
                loop.closed = false;
                break;
            }
            loop.edges.push_back(it->second);
            v = rep(it->second.b);
        }
        if (loop.closed && v != start) loop.closed = false;
        loops.push_back(std::move(loop));
    };
    // open chains first (start where nothing enters), then closed loops
    for (const auto& [v, edge] : next) {
        if (!used[v] && indegree[v] == 0) trace(v);
    }
    for (const auto& [v, edge] : next) {
        if (!used[v]) trace(v);
    }
    std::sort(loops.begin(), loops.end(),
              [](const GarmentBoundaryLoop& x, const GarmentBoundaryLoop& y) { return x.vertices.front() < y.vertices.front(); });
    return loops;
}

} // namespace tailor
