#pragma once

#include <span>
#include <utility>
#include <vector>

#include "tailor/geometry.hpp"

namespace tailor {

// Representative vertex per garment vertex after identifying stitched seam
// copies. Representatives are the smallest index in each group.
[[nodiscard]] std::vector<int> weld_map(int vertex_count, std::span<const SeamLine> seams);

// Ordered boundary loops of a triangle soup, each loop following the
// half-edge direction of its triangles and starting at its smallest vertex.
// Loops are sorted by their starting vertex.
[[nodiscard]] std::vector<std::vector<int>> boundary_loops(std::span<const Tri> triangles);

// Vertex adjacency (unique neighbours, ascending).
[[nodiscard]] std::vector<std::vector<int>> vertex_neighbors(int vertex_count, std::span<const Tri> triangles);

// Edge-connected components of a triangle subset; returns a component id per
// listed triangle, numbered by first appearance.
[[nodiscard]] std::vector<int> triangle_components(std::span<const Tri> triangles);

// Undirected edges in order of first appearance over triangles (edge e of
// triangle t runs from corner e to corner e+1).
[[nodiscard]] std::vector<std::pair<int, int>> unique_edges(std::span<const Tri> triangles);

// A boundary loop of the welded garment. `vertices` are representatives;
// `edges` lists, for each consecutive pair, the garment half-edge (a, b) and
// the triangle owning it.
struct GarmentBoundaryLoop {
    std::vector<int> vertices;
    struct Edge {
        int a = -1;
        int b = -1;
        int triangle = -1;
    };
    std::vector<Edge> edges;
    bool closed = true;
};

[[nodiscard]] std::vector<GarmentBoundaryLoop> garment_boundary_loops(const Mesh3& garment, std::span<const int> weld);

} // namespace tailor
