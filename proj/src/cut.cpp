#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "edit_internal.hpp"
#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/flatten.hpp"
#include "tailor/topology.hpp"

namespace tailor {

namespace {

constexpr double kSnapDistance = 1e-4;
constexpr double kSliverArea = 1e-8;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::pair<long, long> ordered(long a, long b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// A crossing on one garment edge, oriented by welded representative so that
// stitched twin edges produce identical points.
struct Crossing {
    int a = -1; // endpoint with the smaller representative
    int b = -1;
    double t = 0.0;
    int node = -1;
};

struct Sub {
    std::array<long, 3> key{}; // garment vertex, or nv + crossing index
    int parent = -1;
    bool split = false;
    int sign = 0; // +1, -1, 0 (touching only), 2 (both signs)
};

} // namespace

namespace detail {

// Pairs panels that have no symmetry partner yet by matching reflected 3D
// centroids; drops pairs whose panels are gone.
void refresh_symmetry_pairs(GarmentDocument& doc) {
    if (!doc.symmetry) return;
    auto& pairs = doc.symmetry->pairs;
    std::set<int> ids;
    for (const auto& p : doc.panels) ids.insert(p.id);
    std::erase_if(pairs, [&](const auto& pr) { return !ids.count(pr.first) || !ids.count(pr.second); });
    std::set<int> paired;
    for (const auto& [a, b] : pairs) {
        paired.insert(a);
        paired.insert(b);
    }
    std::map<int, Vec3> centroid;
    double extent = 0.0;
    for (const auto& p : doc.panels) {
        Vec3 c = Vec3::Zero();
        for (int g : p.corr) c += doc.garment.vertices[g];
        centroid[p.id] = c / static_cast<double>(p.corr.size());
        for (int g : p.corr) extent = std::max(extent, doc.garment.vertices[g].cwiseAbs().maxCoeff());
    }
    const double tol = 1e-6 * std::max(1.0, extent);
    for (const auto& p : doc.panels) {
        if (paired.count(p.id)) continue;
        const Vec3 r = doc.symmetry->reflect_point(centroid[p.id]);
        for (const auto& q : doc.panels) {
            if (paired.count(q.id) || q.corr.size() != p.corr.size()) continue;
            if ((centroid[q.id] - r).norm() <= tol) {
                pairs.emplace_back(std::min(p.id, q.id), std::max(p.id, q.id));
                paired.insert(p.id);
                paired.insert(q.id);
                break;
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
}

} // namespace detail

Vec3 camera_ray(const Camera& camera, const Vec2& pixel) {
    const Vec3 forward = (camera.target - camera.eye).normalized();
    const Vec3 right = forward.cross(camera.up).normalized();
    const Vec3 up = right.cross(forward);
    const double half = std::tan(camera.fov_y_deg * M_PI / 360.0);
    const double aspect = static_cast<double>(camera.width) / camera.height;
    const double x = (2.0 * pixel.x() / camera.width - 1.0) * half * aspect;
    const double y = (1.0 - 2.0 * pixel.y() / camera.height) * half;
    return (forward + x * right + y * up).normalized();
}

Vec2 project_to_screen(const Camera& camera, const Vec3& point) {
    const Vec3 forward = (camera.target - camera.eye).normalized();
    const Vec3 right = forward.cross(camera.up).normalized();
    const Vec3 up = right.cross(forward);
    const double half = std::tan(camera.fov_y_deg * M_PI / 360.0);
    const double aspect = static_cast<double>(camera.width) / camera.height;
    const Vec3 d = point - camera.eye;
    const double depth = d.dot(forward);
    const double x = d.dot(right) / depth / (half * aspect);
    const double y = d.dot(up) / depth / half;
    return {(x + 1.0) * 0.5 * camera.width, (1.0 - y) * 0.5 * camera.height};
}

TopologyEdit cut_by_field(const GarmentDocument& doc, const CutRequest& request) {
    const Mesh3& g = doc.garment;
    const int nv = g.vertex_count();
    if (static_cast<int>(request.phi.size()) != nv) {
        throw Error(ErrorCode::MismatchedTopology, "cut field size differs from the garment", "field");
    }
    const auto weld = detail::doc_weld(doc);

    std::vector<double> phi = request.phi;
    double finite_max = 0.0;
    for (double x : phi) {
        if (std::isnan(x)) throw Error(ErrorCode::NonFiniteInput, "cut field has NaN", "field");
        if (std::isfinite(x)) finite_max = std::max(finite_max, std::abs(x));
    }
    for (double& x : phi) {
        if (!std::isfinite(x)) x = std::copysign(finite_max + 1.0, x);
    }

    // Snap crossings that land within kSnapDistance of a vertex onto it.
    const auto edges = unique_edges(g.triangles);
    auto zero_group = [&](int v) {
        const int r = weld[v];
        for (int u = 0; u < nv; ++u) {
            if (weld[u] == r) phi[u] = 0.0;
        }
    };
    for (const auto& [a, b] : edges) {
        if (!(phi[a] * phi[b] < 0.0)) continue;
        const double t = phi[a] / (phi[a] - phi[b]);
        const double len = (g.vertices[b] - g.vertices[a]).norm();
        if (t * len < kSnapDistance) {
            zero_group(a);
        } else if ((1.0 - t) * len < kSnapDistance) {
            zero_group(b);
        }
    }

    // Nodes of the cut curves: crossed welded edges and zero vertices.
    std::map<std::pair<long, long>, int> edge_node;
    std::map<int, int> vertex_node;
    std::vector<Vec3> node_pos;
    std::vector<Crossing> crossings;
    std::map<std::pair<long, long>, int> crossing_of; // garment edge -> crossing
    for (const auto& [a0, b0] : edges) {
        if (!(phi[a0] * phi[b0] < 0.0)) continue;
        int a = a0, b = b0;
        if (weld[a] > weld[b] || (weld[a] == weld[b] && a > b)) std::swap(a, b);
        const double t = phi[a] / (phi[a] - phi[b]);
        const auto rkey = ordered(weld[a], weld[b]);
        auto it = edge_node.find(rkey);
        if (it == edge_node.end()) {
            it = edge_node.emplace(rkey, static_cast<int>(node_pos.size())).first;
            node_pos.push_back((1.0 - t) * g.vertices[a] + t * g.vertices[b]);
        }
        crossing_of[ordered(a0, b0)] = static_cast<int>(crossings.size());
        crossings.push_back({a, b, t, it->second});
    }
    for (int v = 0; v < nv; ++v) {
        if (phi[v] == 0.0 && !vertex_node.count(weld[v])) {
            vertex_node[weld[v]] = static_cast<int>(node_pos.size());
            node_pos.push_back(g.vertices[weld[v]]);
        }
    }

    UnionFind curves(node_pos.size());
    for (const Tri& tri : g.triangles) {
        int first = -1;
        for (int k = 0; k < 3; ++k) {
            int node = -1;
            const int a = tri[k], b = tri[(k + 1) % 3];
            if (phi[a] == 0.0) node = vertex_node.at(weld[a]);
            if (node >= 0) {
                if (first < 0) first = node;
                curves.unite(first, node);
            }
            auto c = crossing_of.find(ordered(a, b));
            if (c != crossing_of.end()) {
                if (first < 0) first = crossings[c->second].node;
                curves.unite(first, crossings[c->second].node);
            }
        }
    }
    std::vector<char> curve_kept(node_pos.size(), request.keep ? 0 : 1);
    if (request.keep) {
        for (std::size_t n = 0; n < node_pos.size(); ++n) {
            if (request.keep(node_pos[n])) curve_kept[curves.find(static_cast<int>(n))] = 1;
        }
    }
    std::vector<char> kept(node_pos.size(), 0);
    for (std::size_t n = 0; n < node_pos.size(); ++n) {
        kept[n] = curve_kept[curves.find(static_cast<int>(n))] && (!request.keep_each || request.keep_each(node_pos[n]));
    }

    // Split triangles along kept crossings.
    std::vector<Sub> subs;
    std::set<std::pair<long, long>> cut_edges; // welded keys
    auto rkey_of = [&](long key) -> long {
        return key < nv ? weld[key] : nv + crossings[key - nv].node;
    };
    auto key_phi = [&](long key) { return key < nv ? phi[key] : 0.0; };
    auto zero_kept = [&](int v) { return phi[v] == 0.0 && kept[vertex_node.at(weld[v])]; };
    for (int t = 0; t < g.triangle_count(); ++t) {
        const Tri& tri = g.triangles[t];
        std::array<int, 3> cross{-1, -1, -1};
        int count = 0;
        for (int k = 0; k < 3; ++k) {
            auto c = crossing_of.find(ordered(tri[k], tri[(k + 1) % 3]));
            if (c != crossing_of.end() && kept[crossings[c->second].node]) {
                cross[k] = c->second;
                ++count;
            }
        }
        auto emit = [&](long a, long b, long c, bool split) {
            Sub s;
            s.key = {a, b, c};
            s.parent = t;
            s.split = split;
            bool pos = false, neg = false;
            for (long k : s.key) {
                pos |= key_phi(k) > 0.0;
                neg |= key_phi(k) < 0.0;
            }
            s.sign = pos && neg ? 2 : (pos ? 1 : (neg ? -1 : 0));
            subs.push_back(s);
        };
        if (count == 2) {
            int i = 0;
            while (!(cross[i] >= 0 && cross[(i + 2) % 3] >= 0)) ++i;
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            const long mij = nv + cross[i], mki = nv + cross[k];
            emit(tri[i], mij, mki, true);
            emit(mij, tri[j], tri[k], true);
            emit(mij, tri[k], mki, true);
            cut_edges.insert(ordered(rkey_of(mij), rkey_of(mki)));
        } else if (count == 1) {
            int i = 0;
            while (cross[i] < 0) ++i;
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            const long m = nv + cross[i];
            emit(tri[i], m, tri[k], true);
            emit(m, tri[j], tri[k], true);
            if (zero_kept(tri[k])) cut_edges.insert(ordered(rkey_of(m), weld[tri[k]]));
        } else {
            emit(tri[0], tri[1], tri[2], false);
            for (int k = 0; k < 3; ++k) {
                const int a = tri[k], b = tri[(k + 1) % 3];
                if (zero_kept(a) && zero_kept(b)) cut_edges.insert(ordered(weld[a], weld[b]));
            }
        }
    }

    // Connectivity of the split garment, with opposite sides separated.
    const auto owner_panel = [&](const Sub& s) { return g.panel_ids[s.parent]; };
    UnionFind garment_uf(subs.size()), panel_uf(subs.size());
    std::vector<char> severed_touch(subs.size(), 0);
    {
        std::map<std::pair<long, long>, std::vector<int>> by_edge;
        for (std::size_t s = 0; s < subs.size(); ++s) {
            for (int k = 0; k < 3; ++k) {
                by_edge[ordered(rkey_of(subs[s].key[k]), rkey_of(subs[s].key[(k + 1) % 3]))].push_back(static_cast<int>(s));
            }
        }
        for (const auto& [edge, list] : by_edge) {
            const bool is_cut = cut_edges.count(edge) > 0;
            for (std::size_t x = 0; x < list.size(); ++x) {
                for (std::size_t y = x + 1; y < list.size(); ++y) {
                    const Sub& s1 = subs[list[x]];
                    const Sub& s2 = subs[list[y]];
                    if (is_cut && std::abs(s1.sign) == 1 && std::abs(s2.sign) == 1 && s1.sign != s2.sign) {
                        severed_touch[list[x]] = severed_touch[list[y]] = 1;
                        continue;
                    }
                    garment_uf.unite(list[x], list[y]);
                    if (owner_panel(s1) == owner_panel(s2)) panel_uf.unite(list[x], list[y]);
                }
            }
        }
    }

    // Classify garment components and pick the ones to drop.
    std::map<int, int> comp_sign; // 1, -1, 0 (neutral), 2 (mixed)
    std::map<int, bool> comp_severed;
    for (std::size_t s = 0; s < subs.size(); ++s) {
        const int c = garment_uf.find(static_cast<int>(s));
        int& sg = comp_sign.try_emplace(c, 0).first->second;
        const int x = subs[s].sign;
        if (x == 2 || (x != 0 && sg != 0 && sg != x)) {
            sg = 2;
        } else if (x != 0 && sg == 0) {
            sg = x;
        }
        comp_severed[c] = comp_severed[c] || severed_touch[s];
    }
    std::set<int> dropped;
    if (request.discard_sign != 0) {
        for (const auto& [c, sg] : comp_sign) {
            if (sg == request.discard_sign && comp_severed[c]) dropped.insert(c);
        }
        if (dropped.empty()) {
            throw Error(ErrorCode::OpenLoop, "the cut does not separate the garment", "cut");
        }
    } else {
        std::set<int> before;
        {
            UnionFind uf(g.triangles.size());
            std::map<std::pair<long, long>, int> seen;
            for (int t = 0; t < g.triangle_count(); ++t) {
                for (int k = 0; k < 3; ++k) {
                    const auto e = ordered(weld[g.triangles[t][k]], weld[g.triangles[t][(k + 1) % 3]]);
                    auto [it, fresh] = seen.emplace(e, t);
                    if (!fresh) uf.unite(it->second, t);
                }
            }
            for (int t = 0; t < g.triangle_count(); ++t) before.insert(uf.find(t));
        }
        if (comp_sign.size() <= before.size()) {
            throw Error(ErrorCode::OpenLoop, "the cut does not separate the garment", "cut");
        }
    }

    // Groups: connected pieces of one panel.
    std::vector<int> keep_subs;
    for (std::size_t s = 0; s < subs.size(); ++s) {
        if (!dropped.count(garment_uf.find(static_cast<int>(s)))) keep_subs.push_back(static_cast<int>(s));
    }
    std::map<int, int> group_of_root; // panel_uf root -> group index
    std::vector<int> group_panel_index, group_comp;
    for (int s : keep_subs) {
        const int root = panel_uf.find(s);
        if (!group_of_root.count(root)) {
            group_of_root[root] = static_cast<int>(group_panel_index.size());
            group_panel_index.push_back(doc.panel_index(owner_panel(subs[s])));
            group_comp.push_back(garment_uf.find(s));
        }
    }
    const int group_count = static_cast<int>(group_panel_index.size());
    auto group_of = [&](int s) { return group_of_root.at(panel_uf.find(s)); };

    // Instantiate vertices per (key, group): old vertices first, then crossings.
    std::map<std::pair<long, int>, int> instance;
    {
        std::set<std::pair<long, int>> used;
        for (int s : keep_subs) {
            for (long k : subs[s].key) used.insert({k, group_of(s)});
        }
        for (const auto& kg : used) instance[kg] = -1;
        int next = 0;
        for (auto& [kg, idx] : instance) idx = next++;
    }

    GarmentDocument out;
    out.version = doc.version;
    out.body = doc.body;
    out.symmetry = doc.symmetry;
    out.history = doc.history;
    out.garment.vertices.resize(instance.size());
    auto key_position = [&](long key) -> Vec3 {
        if (key < nv) return g.vertices[key];
        const Crossing& c = crossings[key - nv];
        return (1.0 - c.t) * g.vertices[c.a] + c.t * g.vertices[c.b];
    };
    for (const auto& [kg, idx] : instance) out.garment.vertices[idx] = key_position(kg.first);

    // Panel ids: the first group of each panel keeps its id.
    int next_id = 0;
    for (const auto& p : doc.panels) next_id = std::max(next_id, p.id + 1);
    std::vector<int> group_id(group_count, -1);
    {
        std::vector<char> taken(doc.panels.size(), 0);
        for (int gi = 0; gi < group_count; ++gi) {
            const int pi = group_panel_index[gi];
            group_id[gi] = taken[pi] ? next_id++ : doc.panels[pi].id;
            taken[pi] = 1;
        }
    }

    TopologyEdit result;
    std::vector<int> parent_of, unsplit;
    for (int s : keep_subs) {
        const int gi = group_of(s);
        Tri tri;
        for (int k = 0; k < 3; ++k) tri[k] = instance.at({subs[s].key[k], gi});
        const int t = static_cast<int>(out.garment.triangles.size());
        out.garment.triangles.push_back(tri);
        out.garment.panel_ids.push_back(group_id[gi]);
        parent_of.push_back(subs[s].parent);
        if (subs[s].split) {
            result.affected.push_back(t);
            const auto c = corners(out.garment, t);
            if (triangle_area(c[0], c[1], c[2]) < kSliverArea) {
                result.warnings.push_back("sliver triangle " + std::to_string(t));
            }
        } else {
            unsplit.push_back(t);
        }
    }

    // Panels, in the original order with split-off pieces appended.
    std::vector<int> order(group_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        const bool nx = group_id[x] != doc.panels[group_panel_index[x]].id;
        const bool ny = group_id[y] != doc.panels[group_panel_index[y]].id;
        if (nx != ny) return !nx;
        return nx ? group_id[x] < group_id[y] : group_panel_index[x] < group_panel_index[y];
    });
    for (int gi : order) {
        const Panel& old = doc.panels[group_panel_index[gi]];
        std::map<int, int> local_of_garment;
        for (int i = 0; i < old.vertex_count(); ++i) local_of_garment[old.corr[i]] = i;
        Panel p;
        p.id = group_id[gi];
        std::map<int, int> local;
        for (const auto& [kg, idx] : instance) {
            if (kg.second != gi) continue;
            local[idx] = p.vertex_count();
            p.corr.push_back(idx);
            if (kg.first < nv) {
                p.vertices.push_back(old.vertices[local_of_garment.at(static_cast<int>(kg.first))]);
            } else {
                const Crossing& c = crossings[kg.first - nv];
                p.vertices.push_back((1.0 - c.t) * old.vertices[local_of_garment.at(c.a)] +
                                     c.t * old.vertices[local_of_garment.at(c.b)]);
            }
        }
        for (int t = 0; t < out.garment.triangle_count(); ++t) {
            if (out.garment.panel_ids[t] != p.id) continue;
            const Tri& tri = out.garment.triangles[t];
            p.triangles.push_back({local.at(tri[0]), local.at(tri[1]), local.at(tri[2])});
        }
        p.boundary = panel_boundary(p);
        out.panels.push_back(std::move(p));
    }

    // Seams: walk each chain with crossings inserted, split into runs per
    // garment component.
    for (const SeamLine& seam : doc.seams) {
        std::vector<std::pair<long, long>> chain;
        for (std::size_t k = 0; k < seam.side_a.size(); ++k) {
            chain.emplace_back(seam.side_a[k], seam.side_b[k]);
            if (k + 1 == seam.side_a.size()) break;
            auto ca = crossing_of.find(ordered(seam.side_a[k], seam.side_a[k + 1]));
            auto cb = crossing_of.find(ordered(seam.side_b[k], seam.side_b[k + 1]));
            if (ca != crossing_of.end() && cb != crossing_of.end() && kept[crossings[ca->second].node]) {
                chain.emplace_back(nv + ca->second, nv + cb->second);
            }
        }
        std::set<int> comps(group_comp.begin(), group_comp.end());
        for (int comp : comps) {
            SeamLine run;
            auto flush = [&]() {
                if (!run.side_a.empty()) out.seams.push_back(run);
                run = {};
            };
            for (const auto& [ka, kb] : chain) {
                int ia = -1, ib = -1;
                for (int gi = 0; gi < group_count; ++gi) {
                    if (group_comp[gi] != comp) continue;
                    auto fa = instance.find({ka, gi});
                    auto fb = instance.find({kb, gi});
                    if (fa != instance.end()) ia = fa->second;
                    if (fb != instance.end()) ib = fb->second;
                }
                if (ia >= 0 && ib >= 0) {
                    run.side_a.push_back(ia);
                    run.side_b.push_back(ib);
                } else {
                    flush();
                }
            }
            flush();
        }
    }

    link_panels(out);
    out.scale_map = compute_document_scale_map(out);
    for (int t : unsplit) {
        out.scale_map.matrices[t] = doc.scale_map.matrices[parent_of[t]];
        out.scale_map.designated_edges[t] = doc.scale_map.designated_edges[parent_of[t]];
    }
    detail::refresh_symmetry_pairs(out);
    validate(out);

    result.vertex_map.assign(nv, -1);
    for (const auto& [kg, idx] : instance) {
        if (kg.first < nv && result.vertex_map[kg.first] < 0) result.vertex_map[kg.first] = idx;
    }
    result.doc = std::move(out);
    return result;
}

namespace {

// Distance between two points at which a ray hit counts as the point itself.
bool occluded(const Mesh3& mesh, const Vec3& eye, const Vec3& point) {
    const Vec3 dir = point - eye;
    const double dist = dir.norm();
    const Vec3 d = dir / dist;
    const double limit = dist - (1e-7 * dist + 1e-9);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto c = corners(mesh, t);
        const Vec3 e1 = c[1] - c[0], e2 = c[2] - c[0];
        const Vec3 h = d.cross(e2);
        const double det = e1.dot(h);
        if (std::abs(det) < 1e-14) continue;
        const Vec3 s = eye - c[0];
        const double u = s.dot(h) / det;
        if (u < 0.0 || u > 1.0) continue;
        const Vec3 q = s.cross(e1);
        const double v = d.dot(q) / det;
        if (v < 0.0 || u + v > 1.0) continue;
        const double hit = e2.dot(q) / det;
        if (hit > 1e-9 && hit < limit) return true;
    }
    return false;
}

bool ray_hits(const Mesh3& mesh, const Vec3& eye, const Vec3& d) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto c = corners(mesh, t);
        const Vec3 e1 = c[1] - c[0], e2 = c[2] - c[0];
        const Vec3 h = d.cross(e2);
        const double det = e1.dot(h);
        if (std::abs(det) < 1e-14) continue;
        const Vec3 s = eye - c[0];
        const double u = s.dot(h) / det;
        if (u < 0.0 || u > 1.0) continue;
        const Vec3 q = s.cross(e1);
        const double v = d.dot(q) / det;
        if (v < 0.0 || u + v > 1.0) continue;
        if (e2.dot(q) / det > 1e-9) return true;
    }
    return false;
}

double screen_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * d)).norm();
}

} // namespace

TopologyEdit cut_by_sketch(const GarmentDocument& doc, std::span<const Vec2> sketch, const Camera& camera,
                           bool both_sides, DiscardSide discard) {
    if (sketch.size() < 2) throw Error(ErrorCode::InvalidParameter, "sketch needs at least two points", "sketch");
    for (const Vec2& p : sketch) {
        if (!p.allFinite()) throw Error(ErrorCode::NonFiniteInput, "sketch point is not finite", "sketch");
    }
    if (camera.width <= 0 || camera.height <= 0 || !(camera.fov_y_deg > 0.0 && camera.fov_y_deg < 180.0) ||
        (camera.target - camera.eye).norm() <= 0.0 || (camera.target - camera.eye).cross(camera.up).norm() <= 0.0) {
        throw Error(ErrorCode::InvalidParameter, "camera is degenerate", "camera");
    }
    const Mesh3& g = doc.garment;
    bool any_hit = false;
    for (std::size_t i = 0; i + 1 < sketch.size() && !any_hit; ++i) {
        for (int k = 0; k <= 32 && !any_hit; ++k) {
            const Vec2 p = sketch[i] + (sketch[i + 1] - sketch[i]) * (k / 32.0);
            any_hit = ray_hits(g, camera.eye, camera_ray(camera, p));
        }
    }
    if (!any_hit) throw Error(ErrorCode::NoIntersection, "sketch misses the garment", "sketch");

    // Plane through the eye per sketch segment, oriented so screen-left is
    // positive.
    std::vector<Vec3> normals;
    std::vector<std::pair<Vec2, Vec2>> segments;
    for (std::size_t i = 0; i + 1 < sketch.size(); ++i) {
        if ((sketch[i + 1] - sketch[i]).norm() <= 0.0) continue;
        const Vec3 n = camera_ray(camera, sketch[i + 1]).cross(camera_ray(camera, sketch[i]));
        if (n.norm() <= 1e-15) continue;
        normals.push_back(n.normalized());
        segments.emplace_back(sketch[i], sketch[i + 1]);
    }
    if (segments.empty()) throw Error(ErrorCode::InvalidParameter, "sketch has zero length", "sketch");

    CutRequest request;
    request.phi.resize(g.vertices.size());
    for (int v = 0; v < g.vertex_count(); ++v) {
        const Vec2 s = project_to_screen(camera, g.vertices[v]);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < segments.size(); ++i) {
            // first and last segments extend past the sketch ends
            Vec2 a = segments[i].first, b = segments[i].second;
            const Vec2 dir = (b - a).normalized() * 1e7;
            if (i == 0) a -= dir;
            if (i + 1 == segments.size()) b += dir;
            const double d = screen_segment_distance(s, a, b);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        request.phi[v] = (g.vertices[v] - camera.eye).dot(normals[best]);
    }
    bool pos = false, neg = false;
    for (double x : request.phi) {
        pos |= x > 0.0;
        neg |= x < 0.0;
    }
    if (!pos || !neg) throw Error(ErrorCode::NoIntersection, "sketch plane does not cross the garment", "sketch");

    auto within_sketch = [&camera, segments](const Vec3& p) {
        const Vec2 s = project_to_screen(camera, p);
        for (const auto& [a, b] : segments) {
            if (screen_segment_distance(s, a, b) <= 0.5) return true;
        }
        return false;
    };
    if (both_sides) {
        request.keep = within_sketch;
    } else {
        const Vec3 eye = camera.eye;
        request.keep_each = [within_sketch, &g, eye](const Vec3& p) { return within_sketch(p) && !occluded(g, eye, p); };
    }
    request.discard_sign = discard == DiscardSide::Left ? 1 : (discard == DiscardSide::Right ? -1 : 0);
    return cut_by_field(doc, request);
}

std::vector<int> resolve_boundary(const GarmentDocument& doc, const BoundaryRef& ref) {
    detail::check_vertex(doc.garment, ref.vertex);
    if (ref.to) detail::check_vertex(doc.garment, *ref.to);
    const auto weld = detail::doc_weld(doc);
    const auto loops = garment_boundary_loops(doc.garment, weld);
    for (const auto& loop : loops) {
        auto it = std::find(loop.vertices.begin(), loop.vertices.end(), weld[ref.vertex]);
        if (it == loop.vertices.end()) continue;
        if (!ref.to) return loop.vertices;
        const std::size_t n = loop.vertices.size();
        const std::size_t i = static_cast<std::size_t>(it - loop.vertices.begin());
        auto jt = std::find(loop.vertices.begin(), loop.vertices.end(), weld[*ref.to]);
        if (jt == loop.vertices.end()) {
            throw Error(ErrorCode::NoBoundary, "run end is not on the same boundary", "vertex " + std::to_string(*ref.to));
        }
        const std::size_t j = static_cast<std::size_t>(jt - loop.vertices.begin());
        std::vector<int> run;
        if (!loop.closed && j < i) {
            throw Error(ErrorCode::NoBoundary, "run end precedes its start", "vertex " + std::to_string(*ref.to));
        }
        for (std::size_t k = i;; k = (k + 1) % n) {
            run.push_back(loop.vertices[k]);
            if (k == j) break;
        }
        return run;
    }
    throw Error(ErrorCode::NoBoundary, "vertex is not on a garment boundary", "vertex " + std::to_string(ref.vertex));
}

TopologyEdit shorten(const GarmentDocument& doc, const BoundaryRef& boundary, double distance) {
    if (!std::isfinite(distance) || distance < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "distance must be finite and non-negative", "distance");
    }
    const auto run = resolve_boundary(doc, boundary);
    if (distance == 0.0) {
        TopologyEdit same{doc, {}, {}, {}};
        same.vertex_map.resize(doc.garment.vertices.size());
        std::iota(same.vertex_map.begin(), same.vertex_map.end(), 0);
        return same;
    }
    const auto weld = detail::doc_weld(doc);
    const auto dist = geodesic_from_boundary(doc.garment, run, weld);
    if (extract_isoline(doc.garment, dist, distance).empty()) {
        throw Error(ErrorCode::EmptyIsoline, "no garment lies at that distance from the boundary", "distance");
    }
    CutRequest request;
    request.phi.resize(dist.size());
    for (std::size_t v = 0; v < dist.size(); ++v) request.phi[v] = dist[v] - distance;
    request.discard_sign = -1;
    return cut_by_field(doc, request);
}

} // namespace tailor
