#include "tailor/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

#include "tailor/error.hpp"
#include "tailor/flatten.hpp"

namespace tailor {

void prepare_document(GarmentDocument& doc) {
    link_panels(doc);
    validate(doc);
    doc.scale_map = compute_document_scale_map(doc);
}

double round9(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

namespace {

[[noreturn]] void schema_fail(const std::string& what, const std::string& entity) {
    throw Error(ErrorCode::ValidationError, what, entity);
}

const Json& need(const Json& j, const char* key, const std::string& entity) {
    if (!j.is_object() || !j.contains(key)) schema_fail(std::string("missing key '") + key + "'", entity);
    return j.at(key);
}

double num(const Json& j, const std::string& entity) {
    if (!j.is_number()) schema_fail("expected a number", entity);
    return j.get<double>();
}

int integer(const Json& j, const std::string& entity) {
    if (!j.is_number_integer()) schema_fail("expected an integer", entity);
    return j.get<int>();
}

std::string text(const Json& j, const std::string& entity) {
    if (!j.is_string()) schema_fail("expected a string", entity);
    return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& entity) {
    if (!j.is_array()) schema_fail("expected an array", entity);
    return j;
}

std::vector<int> ints(const Json& j, const std::string& entity) {
    std::vector<int> out;
    for (const Json& v : array(j, entity)) out.push_back(integer(v, entity));
    return out;
}

template <int N>
std::vector<Eigen::Matrix<double, N, 1>> points(const Json& j, const std::string& entity) {
    const Json& a = array(j, entity);
    if (a.size() % N != 0) schema_fail("flat coordinate array length must be a multiple of " + std::to_string(N), entity);
    std::vector<Eigen::Matrix<double, N, 1>> out(a.size() / N);
    for (std::size_t i = 0; i < a.size(); ++i) out[i / N](static_cast<int>(i % N)) = num(a[i], entity);
    return out;
}

std::vector<Tri> triangles(const Json& j, const std::string& entity) {
    const auto flat = ints(j, entity);
    if (flat.size() % 3 != 0) schema_fail("triangle array length must be a multiple of 3", entity);
    std::vector<Tri> out(flat.size() / 3);
    for (std::size_t i = 0; i < flat.size(); ++i) out[i / 3][i % 3] = flat[i];
    return out;
}

Vec3 vec3(const Json& j, const std::string& entity) {
    const Json& a = array(j, entity);
    if (a.size() != 3) schema_fail("expected 3 numbers", entity);
    return {num(a[0], entity), num(a[1], entity), num(a[2], entity)};
}

Json vec_json(const Vec3& v) { return Json::array({round9(v.x()), round9(v.y()), round9(v.z())}); }

Json flat_json(std::span<const Vec3> pts) {
    Json a = Json::array();
    for (const Vec3& p : pts) {
        a.push_back(round9(p.x()));
        a.push_back(round9(p.y()));
        a.push_back(round9(p.z()));
    }
    return a;
}

Json flat_json(std::span<const Vec2> pts) {
    Json a = Json::array();
    for (const Vec2& p : pts) {
        a.push_back(round9(p.x()));
        a.push_back(round9(p.y()));
    }
    return a;
}

Json tris_json(std::span<const Tri> tris) {
    Json a = Json::array();
    for (const Tri& t : tris) {
        for (int c : t) a.push_back(c);
    }
    return a;
}

Json ref_json(const BoundaryRef& r) {
    Json j = {{"vertex", r.vertex}};
    if (r.to) j["to"] = *r.to;
    return j;
}

BoundaryRef ref_from_json(const Json& j, const std::string& entity) {
    BoundaryRef r;
    r.vertex = integer(need(j, "vertex", entity), entity);
    if (j.contains("to")) r.to = integer(j.at("to"), entity);
    return r;
}

const char* mode_name(AxisMode m) { return m == AxisMode::Along ? "along" : "perpendicular"; }

const char* discard_name(DiscardSide d) {
    switch (d) {
    case DiscardSide::None: return "none";
    case DiscardSide::Left: return "left";
    case DiscardSide::Right: return "right";
    }
    return "none";
}

AxisMode mode_from(const Json& j, const std::string& entity) {
    const std::string s = text(j, entity);
    if (s == "along") return AxisMode::Along;
    if (s == "perpendicular") return AxisMode::Perpendicular;
    schema_fail("unknown mode '" + s + "'", entity);
}

DiscardSide discard_from(const Json& j, const std::string& entity) {
    const std::string s = text(j, entity);
    if (s == "none") return DiscardSide::None;
    if (s == "left") return DiscardSide::Left;
    if (s == "right") return DiscardSide::Right;
    schema_fail("unknown discard side '" + s + "'", entity);
}

Json parse_json(std::string_view bytes) {
    try {
        return Json::parse(bytes.begin(), bytes.end());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "malformed input at byte " + std::to_string(e.byte) + ": " + e.what(),
                    "byte " + std::to_string(e.byte));
    }
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::InvalidParameter, "SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

} // namespace

Json mesh_to_json(const Mesh3& mesh, bool with_panels) {
    Json j = {{"vertices", flat_json(std::span<const Vec3>(mesh.vertices))}, {"triangles", tris_json(mesh.triangles)}};
    if (with_panels) j["panel_ids"] = mesh.panel_ids;
    return j;
}

Json panel_to_json(const Panel& p) {
    return {{"id", p.id},
            {"vertices", flat_json(std::span<const Vec2>(p.vertices))},
            {"triangles", tris_json(p.triangles)},
            {"boundary", p.boundary},
            {"corr", p.corr}};
}

Json seam_to_json(const SeamLine& s) { return {{"side_a", s.side_a}, {"side_b", s.side_b}}; }

Json document_to_json(const GarmentDocument& doc, bool with_history) {
    Json body = mesh_to_json(doc.body.mesh, false);
    body["skeleton"] = Json::array();
    for (const Bone& b : doc.body.skeleton) body["skeleton"].push_back({{"name", b.name}, {"a", vec_json(b.a)}, {"b", vec_json(b.b)}});
    body["features"] = Json::array();
    for (const FeaturePoint& f : doc.body.features) {
        body["features"].push_back({{"name", f.name}, {"position", vec_json(f.position)}});
    }
    Json j = {{"version", doc.version}, {"body", body}, {"garment", mesh_to_json(doc.garment, true)}};
    j["panels"] = Json::array();
    for (const Panel& p : doc.panels) j["panels"].push_back(panel_to_json(p));
    j["seams"] = Json::array();
    for (const SeamLine& s : doc.seams) j["seams"].push_back(seam_to_json(s));
    if (doc.symmetry) {
        Json pairs = Json::array();
        for (const auto& [a, b] : doc.symmetry->pairs) pairs.push_back({a, b});
        j["symmetry"] = {{"point", vec_json(doc.symmetry->point)}, {"normal", vec_json(doc.symmetry->normal)}, {"pairs", pairs}};
    } else {
        j["symmetry"] = nullptr;
    }
    if (with_history) {
        j["history"] = Json::array();
        for (const HistoryEntry& h : doc.history) {
            j["history"].push_back({{"op", op_to_json(h.op)}, {"mirror", h.mirror}, {"hash", h.hash}});
        }
    }
    return j;
}

std::string save_document(const GarmentDocument& doc) { return document_to_json(doc).dump(1) + "\n"; }

std::string document_hash(const GarmentDocument& doc) { return sha256_hex(document_to_json(doc, false).dump()); }

GarmentDocument load_document(std::string_view bytes) {
    const Json j = parse_json(bytes);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object", "byte 0");
    const std::string version = text(need(j, "version", "document"), "version");
    if (version != kFormatVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "version '" + version + "' is not " + kFormatVersion, "version");
    }
    GarmentDocument doc;
    doc.version = version;

    const Json& body = need(j, "body", "document");
    doc.body.mesh.vertices = points<3>(need(body, "vertices", "body"), "body.vertices");
    doc.body.mesh.triangles = triangles(need(body, "triangles", "body"), "body.triangles");
    if (body.contains("skeleton")) {
        for (const Json& b : array(body.at("skeleton"), "body.skeleton")) {
            Bone bone;
            bone.name = text(need(b, "name", "bone"), "bone");
            bone.a = vec3(need(b, "a", "bone " + bone.name), "bone " + bone.name);
            bone.b = vec3(need(b, "b", "bone " + bone.name), "bone " + bone.name);
            doc.body.skeleton.push_back(bone);
        }
    }
    if (body.contains("features")) {
        for (const Json& f : array(body.at("features"), "body.features")) {
            FeaturePoint fp;
            fp.name = text(need(f, "name", "feature"), "feature");
            fp.position = vec3(need(f, "position", "feature " + fp.name), "feature " + fp.name);
            doc.body.features.push_back(fp);
        }
    }

    const Json& garment = need(j, "garment", "document");
    doc.garment.vertices = points<3>(need(garment, "vertices", "garment"), "garment.vertices");
    doc.garment.triangles = triangles(need(garment, "triangles", "garment"), "garment.triangles");
    doc.garment.panel_ids = ints(need(garment, "panel_ids", "garment"), "garment.panel_ids");

    for (const Json& pj : array(need(j, "panels", "document"), "panels")) {
        Panel p;
        p.id = integer(need(pj, "id", "panel"), "panel");
        const std::string ent = "panel " + std::to_string(p.id);
        p.vertices = points<2>(need(pj, "vertices", ent), ent);
        p.triangles = triangles(need(pj, "triangles", ent), ent);
        p.boundary = ints(need(pj, "boundary", ent), ent);
        p.corr = ints(need(pj, "corr", ent), ent);
        for (int b : p.boundary) {
            if (b < 0 || b >= p.vertex_count()) schema_fail("boundary references a missing vertex", ent);
        }
        if (p.boundary.empty()) schema_fail("boundary must list the panel boundary loop", ent);
        doc.panels.push_back(std::move(p));
    }
    if (j.contains("seams")) {
        int k = 0;
        for (const Json& sj : array(j.at("seams"), "seams")) {
            const std::string ent = "seam " + std::to_string(k++);
            doc.seams.push_back({ints(need(sj, "side_a", ent), ent), ints(need(sj, "side_b", ent), ent)});
        }
    }
    if (j.contains("symmetry") && !j.at("symmetry").is_null()) {
        const Json& sj = j.at("symmetry");
        Symmetry sym;
        sym.point = vec3(need(sj, "point", "symmetry"), "symmetry");
        sym.normal = vec3(need(sj, "normal", "symmetry"), "symmetry");
        for (const Json& pair : array(need(sj, "pairs", "symmetry"), "symmetry")) {
            const auto ab = ints(pair, "symmetry");
            if (ab.size() != 2) schema_fail("pairs must hold two panel ids", "symmetry");
            sym.pairs.emplace_back(ab[0], ab[1]);
        }
        doc.symmetry = sym;
    }
    if (j.contains("history")) {
        int k = 0;
        for (const Json& hj : array(j.at("history"), "history")) {
            const std::string ent = "history " + std::to_string(k++);
            HistoryEntry h;
            h.op = op_from_json(need(hj, "op", ent));
            if (hj.contains("mirror")) {
                if (!hj.at("mirror").is_boolean()) schema_fail("mirror must be a boolean", ent);
                h.mirror = hj.at("mirror").get<bool>();
            }
            if (hj.contains("hash")) h.hash = text(hj.at("hash"), ent);
            doc.history.push_back(std::move(h));
        }
    }

    prepare_document(doc);
    for (const Panel& p : doc.panels) {
        if (!boundary_is_simple(p)) schema_fail("boundary loop must be simple", "panel " + std::to_string(p.id));
    }
    return doc;
}

Json op_to_json(const EditOp& op) {
    Json j = {{"kind", to_string(op.kind)}};
    switch (op.kind) {
    case EditKind::ScaleRegion:
        j["region"] = {{"triangles", op.region.triangles}, {"anchors", op.region.anchors}};
        j["mode"] = mode_name(op.mode);
        j["factor"] = op.factor;
        break;
    case EditKind::MoveSeam:
        j["seam"] = op.seam;
        j["mode"] = mode_name(op.mode);
        j["offset"] = op.offset;
        if (op.fixed_boundary) j["fixed_boundary"] = ref_json(*op.fixed_boundary);
        break;
    case EditKind::Cut: {
        Json sketch = Json::array();
        for (const Vec2& p : op.sketch) {
            sketch.push_back(p.x());
            sketch.push_back(p.y());
        }
        j["sketch"] = sketch;
        const Camera& c = op.camera;
        j["camera"] = {{"eye", {c.eye.x(), c.eye.y(), c.eye.z()}},
                       {"target", {c.target.x(), c.target.y(), c.target.z()}},
                       {"up", {c.up.x(), c.up.y(), c.up.z()}},
                       {"fov_y", c.fov_y_deg},
                       {"width", c.width},
                       {"height", c.height}};
        j["both_sides"] = op.both_sides;
        j["discard"] = discard_name(op.discard);
        break;
    }
    case EditKind::Shorten:
    case EditKind::Extend:
        j["boundary"] = ref_json(op.boundary);
        j["distance"] = op.distance;
        break;
    }
    return j;
}

EditOp op_from_json(const Json& j) {
    const std::string ent = "op";
    EditOp op;
    const std::string kind = text(need(j, "kind", ent), ent);
    if (kind == "scale_region") {
        op.kind = EditKind::ScaleRegion;
        const Json& r = need(j, "region", ent);
        op.region.triangles = ints(need(r, "triangles", ent), ent);
        if (r.contains("anchors")) op.region.anchors = ints(r.at("anchors"), ent);
        op.mode = mode_from(need(j, "mode", ent), ent);
        op.factor = num(need(j, "factor", ent), ent);
    } else if (kind == "move_seam") {
        op.kind = EditKind::MoveSeam;
        op.seam = integer(need(j, "seam", ent), ent);
        op.mode = mode_from(need(j, "mode", ent), ent);
        op.offset = num(need(j, "offset", ent), ent);
        if (j.contains("fixed_boundary") && !j.at("fixed_boundary").is_null()) {
            op.fixed_boundary = ref_from_json(j.at("fixed_boundary"), ent);
        }
    } else if (kind == "cut") {
        op.kind = EditKind::Cut;
        const Json& s = array(need(j, "sketch", ent), ent);
        if (s.size() % 2 != 0) schema_fail("sketch must hold x,y pairs", ent);
        for (std::size_t i = 0; i < s.size(); i += 2) op.sketch.emplace_back(num(s[i], ent), num(s[i + 1], ent));
        if (j.contains("camera")) {
            const Json& c = j.at("camera");
            if (c.contains("eye")) op.camera.eye = vec3(c.at("eye"), ent);
            if (c.contains("target")) op.camera.target = vec3(c.at("target"), ent);
            if (c.contains("up")) op.camera.up = vec3(c.at("up"), ent);
            if (c.contains("fov_y")) op.camera.fov_y_deg = num(c.at("fov_y"), ent);
            if (c.contains("width")) op.camera.width = integer(c.at("width"), ent);
            if (c.contains("height")) op.camera.height = integer(c.at("height"), ent);
        }
        if (j.contains("both_sides")) {
            if (!j.at("both_sides").is_boolean()) schema_fail("both_sides must be a boolean", ent);
            op.both_sides = j.at("both_sides").get<bool>();
        }
        if (j.contains("discard")) op.discard = discard_from(j.at("discard"), ent);
    } else if (kind == "shorten" || kind == "extend") {
        op.kind = kind == "shorten" ? EditKind::Shorten : EditKind::Extend;
        op.boundary = ref_from_json(need(j, "boundary", ent), ent);
        op.distance = num(need(j, "distance", ent), ent);
    } else {
        schema_fail("unknown op kind '" + kind + "'", ent);
    }
    return op;
}

std::vector<ScriptEntry> load_edit_script(std::string_view bytes) {
    const Json j = parse_json(bytes);
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object", "byte 0");
    const std::string version = text(need(j, "version", "script"), "version");
    if (version != kFormatVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "version '" + version + "' is not " + kFormatVersion, "version");
    }
    std::vector<ScriptEntry> out;
    int k = 0;
    for (const Json& rec : array(need(j, "ops", "script"), "ops")) {
        ++k;
        ScriptEntry e;
        try {
            e.op = op_from_json(rec);
        } catch (const Error& err) {
            throw Error(err.code(), err.detail(), "op " + std::to_string(k));
        }
        if (rec.contains("mirror")) {
            if (!rec.at("mirror").is_boolean()) schema_fail("mirror must be a boolean", "op " + std::to_string(k));
            e.mirror = rec.at("mirror").get<bool>();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string save_edit_script(std::span<const ScriptEntry> entries) {
    Json ops = Json::array();
    for (const ScriptEntry& e : entries) {
        Json rec = op_to_json(e.op);
        rec["mirror"] = e.mirror;
        ops.push_back(rec);
    }
    return Json{{"version", kFormatVersion}, {"ops", ops}}.dump(1) + "\n";
}

Mesh3 import_obj(std::string_view bytes, const std::map<std::string, int>& panel_assignment) {
    Mesh3 mesh;
    std::istringstream in{std::string(bytes)};
    std::string line;
    std::string group = "default";
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        const std::string where = "line " + std::to_string(line_no);
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) throw Error(ErrorCode::ParseError, "vertex needs three coordinates", where);
            mesh.vertices.push_back(p);
        } else if (tag == "g" || tag == "usemtl" || tag == "o") {
            if (tag == "o") continue;
            std::string name;
            ls >> name;
            group = name.empty() ? "default" : name;
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                const std::string head = tok.substr(0, tok.find('/'));
                int v = 0;
                try {
                    std::size_t used = 0;
                    v = std::stoi(head, &used);
                    if (used != head.size()) throw std::invalid_argument(head);
                } catch (const std::exception&) {
                    throw Error(ErrorCode::ParseError, "bad face index '" + tok + "'", where);
                }
                v = v < 0 ? mesh.vertex_count() + v : v - 1;
                if (v < 0 || v >= mesh.vertex_count()) throw Error(ErrorCode::ParseError, "face index out of range", where);
                idx.push_back(v);
            }
            if (idx.size() != 3) {
                throw Error(ErrorCode::NonTriangleFace, "face has " + std::to_string(idx.size()) + " vertices",
                            "face " + std::to_string(mesh.triangle_count()));
            }
            const auto it = panel_assignment.find(group);
            if (it == panel_assignment.end()) throw Error(ErrorCode::MissingGroup, "group has no panel assignment", group);
            mesh.triangles.push_back({idx[0], idx[1], idx[2]});
            mesh.panel_ids.push_back(it->second);
        }
    }
    return mesh;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string outline_path(const Panel& p, const Vec2& shift, const char* style) {
    const auto loop = p.boundary.empty() ? panel_boundary(p) : p.boundary;
    std::string d;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec2 q = p.vertices[loop[i]] + shift;
        d += (i == 0 ? "M " : " L ") + fmt(q.x()) + " " + fmt(q.y());
    }
    d += " Z";
    return "<path d=\"" + d + "\" " + style + "/>\n";
}

} // namespace

std::string export_pattern_svg(std::span<const Panel> panels, std::span<const Panel> originals) {
    constexpr double kGap = 2.0;
    std::string body;
    double cursor = 0.0;
    double height = 0.0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const Panel& p = panels[k];
        const Panel* orig = nullptr;
        for (const Panel& o : originals) {
            if (o.id == p.id) orig = &o;
        }
        Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
        Vec2 hi = -lo;
        for (const Vec2& v : p.vertices) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        if (orig) {
            for (const Vec2& v : orig->vertices) {
                lo = lo.cwiseMin(v);
                hi = hi.cwiseMax(v);
            }
        }
        if (p.vertices.empty()) continue;
        if (k > 0) cursor += kGap;
        const Vec2 shift(cursor - lo.x(), -lo.y());
        if (orig) {
            body += outline_path(*orig, shift, "fill=\"none\" stroke=\"gray\" stroke-width=\"0.1\" stroke-dasharray=\"0.5 0.3\"");
        }
        body += outline_path(p, shift, "fill=\"none\" stroke=\"black\" stroke-width=\"0.1\"");
        cursor += hi.x() - lo.x();
        height = std::max(height, hi.y() - lo.y());
    }
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(cursor) + "cm\" height=\"" + fmt(height) +
                      "cm\" viewBox=\"0 0 " + fmt(cursor) + " " + fmt(height) + "\">\n";
    out += body;
    out += "</svg>\n";
    return out;
}

} // namespace tailor
