#pragma once

#include <string>
#include <vector>

#include "tailor/document.hpp"
#include "tailor/error.hpp"
#include "tailor/topology.hpp"

namespace tailor::detail {

// Panel id per garment vertex (from the triangles that use it).
inline std::vector<int> vertex_panels(const Mesh3& garment) {
    std::vector<int> out(garment.vertices.size(), -1);
    for (std::size_t t = 0; t < garment.triangles.size(); ++t) {
        for (int v : garment.triangles[t]) out[v] = garment.panel_ids[t];
    }
    return out;
}

inline std::vector<int> changed_triangles(const Mesh3& before, const Mesh3& after) {
    std::vector<int> out;
    for (std::size_t t = 0; t < before.triangles.size(); ++t) {
        for (int v : before.triangles[t]) {
            if (before.vertices[v] != after.vertices[v]) {
                out.push_back(static_cast<int>(t));
                break;
            }
        }
    }
    return out;
}

inline void check_vertex(const Mesh3& garment, int v) {
    if (v < 0 || v >= garment.vertex_count()) {
        throw Error(ErrorCode::InvalidIndex, "vertex index out of range", "vertex " + std::to_string(v));
    }
}

inline std::vector<int> doc_weld(const GarmentDocument& doc) {
    return weld_map(doc.garment.vertex_count(), doc.seams);
}

} // namespace tailor::detail
