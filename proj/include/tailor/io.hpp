#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tailor/document.hpp"

namespace tailor {

using Json = nlohmann::json;

// Links panels, validates, and computes the intrinsic scale map.
void prepare_document(GarmentDocument& doc);

// Parses the structured-text document; throws ParseError (with byte offset),
// UnsupportedVersion or ValidationError.
[[nodiscard]] GarmentDocument load_document(std::string_view text);

// Canonical serialization: coordinates at 9 significant digits, stable key
// order, history as op records.
[[nodiscard]] std::string save_document(const GarmentDocument& doc);

// SHA-256 (hex) of the canonical geometry (history and scale map excluded).
[[nodiscard]] std::string document_hash(const GarmentDocument& doc);

// Rounds to 9 significant digits, the precision every serializer uses.
[[nodiscard]] double round9(double v);

// Document fragments, shared with the service payloads.
[[nodiscard]] Json mesh_to_json(const Mesh3& mesh, bool with_panels);
[[nodiscard]] Json panel_to_json(const Panel& panel);
[[nodiscard]] Json seam_to_json(const SeamLine& seam);
[[nodiscard]] Json document_to_json(const GarmentDocument& doc, bool with_history = true);

[[nodiscard]] Json op_to_json(const EditOp& op);
[[nodiscard]] EditOp op_from_json(const Json& j);

struct ScriptEntry {
    EditOp op;
    bool mirror = false;
};

[[nodiscard]] std::vector<ScriptEntry> load_edit_script(std::string_view text);
[[nodiscard]] std::string save_edit_script(std::span<const ScriptEntry> entries);

// Triangulated OBJ: positions, faces and group/material names. Each face takes
// the panel id mapped from the most recent `g` or `usemtl` name.
[[nodiscard]] Mesh3 import_obj(std::string_view text, const std::map<std::string, int>& panel_assignment);

// Boundary paths laid out left to right with 2 cm gaps. Panels in `originals`
// with a matching id are drawn dashed under the current outline.
[[nodiscard]] std::string export_pattern_svg(std::span<const Panel> panels, std::span<const Panel> originals = {});

} // namespace tailor
