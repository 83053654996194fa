#include "tailor/service.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include <httplib.h>

#include "tailor/edit_ops.hpp"
#include "tailor/error.hpp"
#include "tailor/topology.hpp"

namespace tailor::service {

namespace {

Response fail(int status, std::string_view code, std::string_view entity, std::string_view message) {
    return {status, error_body(code, entity, message)};
}

Response fail(int status, const Error& e) { return fail(status, to_string(e.code()), e.entity(), e.detail()); }

Response not_found(const std::string& id) {
    return fail(404, "SessionNotFound", "session " + id, "no session with this id");
}

Json vec_json(const Vec3& v) { return Json::array({round9(v.x()), round9(v.y()), round9(v.z())}); }

bool moved(const Vec3& a, const Vec3& b) { return (a - b).cwiseAbs().maxCoeff() >= kDeltaEpsilon; }
bool moved(const Vec2& a, const Vec2& b) { return (a - b).cwiseAbs().maxCoeff() >= kDeltaEpsilon; }

bool same_seams(const std::vector<SeamLine>& a, const std::vector<SeamLine>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].side_a != b[k].side_a || a[k].side_b != b[k].side_b) return false;
    }
    return true;
}

bool panel_changed(const Panel& before, const Panel& after) {
    if (before.triangles != after.triangles || before.boundary != after.boundary || before.corr != after.corr) return true;
    for (int v = 0; v < after.vertex_count(); ++v) {
        if (moved(before.vertices[v], after.vertices[v])) return true;
    }
    return false;
}

// Change set between two revisions. Moved vertices are grouped into
// contiguous index ranges; a topology change sends the whole garment since
// indices are no longer comparable.
Json changes(const GarmentDocument& before, const GarmentDocument& after) {
    Json out;
    const Mesh3& g0 = before.garment;
    const Mesh3& g1 = after.garment;
    if (g0.vertices.size() == g1.vertices.size() && g0.triangles == g1.triangles && g0.panel_ids == g1.panel_ids) {
        Json ranges = Json::array();
        int v = 0;
        const int n = g1.vertex_count();
        while (v < n) {
            if (!moved(g0.vertices[v], g1.vertices[v])) {
                ++v;
                continue;
            }
            Json positions = Json::array();
            const int start = v;
            for (; v < n && moved(g0.vertices[v], g1.vertices[v]); ++v) {
                for (int c = 0; c < 3; ++c) positions.push_back(round9(g1.vertices[v][c]));
            }
            ranges.push_back({{"start", start}, {"count", v - start}, {"positions", positions}});
        }
        out["vertex_ranges"] = ranges;
    } else {
        out["garment"] = mesh_to_json(g1, true);
    }

    Json panels = Json::array();
    for (const Panel& p : after.panels) {
        const Panel* old = before.find_panel(p.id);
        if (!old || panel_changed(*old, p)) panels.push_back(panel_to_json(p));
    }
    out["panels"] = panels;
    Json removed = Json::array();
    for (const Panel& p : before.panels) {
        if (!after.find_panel(p.id)) removed.push_back(p.id);
    }
    out["removed_panels"] = removed;
    if (!same_seams(before.seams, after.seams)) {
        Json seams = Json::array();
        for (const SeamLine& s : after.seams) seams.push_back(seam_to_json(s));
        out["seams"] = seams;
    }
    return out;
}

Json summary(const GarmentDocument& doc) {
    Json panels = Json::array();
    for (const Panel& p : doc.panels) {
        panels.push_back({{"id", p.id}, {"vertices", p.vertex_count()}, {"triangles", p.triangle_count()},
                          {"boundary", p.boundary}});
    }
    Json seams = Json::array();
    for (std::size_t k = 0; k < doc.seams.size(); ++k) {
        const SeamLine& s = doc.seams[k];
        seams.push_back({{"index", k}, {"pairs", s.side_a.size()}, {"side_a", s.side_a}, {"side_b", s.side_b}});
    }
    Json boundaries = Json::array();
    const auto weld = weld_map(doc.garment.vertex_count(), doc.seams);
    for (const auto& loop : garment_boundary_loops(doc.garment, weld)) {
        boundaries.push_back({{"vertices", loop.vertices}, {"closed", loop.closed}});
    }
    Json symmetry = nullptr;
    if (doc.symmetry) {
        Json pairs = Json::array();
        for (const auto& [a, b] : doc.symmetry->pairs) pairs.push_back({a, b});
        symmetry = {{"point", vec_json(doc.symmetry->point)}, {"normal", vec_json(doc.symmetry->normal)}, {"pairs", pairs}};
    }
    return {{"panels", panels}, {"seams", seams}, {"boundaries", boundaries}, {"symmetry", symmetry}};
}

std::function<std::string()> id_source() {
    auto rng = std::make_shared<std::mt19937_64>(std::random_device{}());
    auto mutex = std::make_shared<std::mutex>();
    return [rng, mutex] {
        std::lock_guard lock(*mutex);
        char buf[33];
        std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>((*rng)()),
                      static_cast<unsigned long long>((*rng)()));
        return std::string(buf);
    };
}

} // namespace

Json error_body(std::string_view code, std::string_view entity, std::string_view message) {
    return {{"code", code}, {"entity", entity}, {"message", message}};
}

Json layout_offsets(const GarmentDocument& doc) {
    Json out = Json::array();
    double cursor = 0.0;
    for (const Panel& p : doc.panels) {
        if (p.vertices.empty()) continue;
        Vec2 lo = p.vertices[0], hi = p.vertices[0];
        for (const Vec2& v : p.vertices) {
            lo = lo.cwiseMin(v);
            hi = hi.cwiseMax(v);
        }
        out.push_back({{"panel", p.id}, {"dx", round9(cursor - lo.x())}, {"dy", round9(-lo.y())}});
        cursor += hi.x() - lo.x() + 2.0;
    }
    return out;
}

// Readers take the current snapshot without waiting for a running edit;
// writers hold `edit` for the whole operation.
struct SessionStore::Session {
    struct Snapshot {
        GarmentDocument doc;
        long revision = 0;
        std::string hash;
    };

    GarmentDocument base;
    std::vector<ScriptEntry> log;
    std::mutex edit;

    mutable std::mutex swap;
    std::shared_ptr<const Snapshot> current;

    std::shared_ptr<const Snapshot> snapshot() const {
        std::lock_guard lock(swap);
        return current;
    }
    void publish(GarmentDocument doc, long revision) {
        auto next = std::make_shared<Snapshot>();
        next->hash = document_hash(doc);
        next->doc = std::move(doc);
        next->revision = revision;
        std::lock_guard lock(swap);
        current = std::move(next);
    }
};

SessionStore::SessionStore() : next_id_(id_source()) {}
SessionStore::~SessionStore() = default;

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Response SessionStore::create(std::string_view document_bytes) {
    GarmentDocument doc;
    try {
        doc = load_document(document_bytes);
    } catch (const Error& e) {
        return fail(400, e);
    }
    auto session = std::make_shared<Session>();
    session->base = doc;
    session->publish(std::move(doc), 0);
    const auto snap = session->snapshot();
    std::string id;
    {
        std::lock_guard lock(mutex_);
        do {
            id = next_id_();
        } while (sessions_.count(id));
        sessions_.emplace(id, session);
    }
    return {201, {{"id", id}, {"revision", 0}, {"hash", snap->hash}, {"summary", summary(snap->doc)}}};
}

Response SessionStore::state(const std::string& id, std::string_view what, std::optional<long> revision) {
    const auto session = find(id);
    if (!session) return not_found(id);
    const auto snap = session->snapshot();
    if (revision && *revision != snap->revision) {
        return fail(409, "RevisionConflict", "session " + id,
                    "revision " + std::to_string(*revision) + " is stale; current is " + std::to_string(snap->revision));
    }
    Json body = {{"revision", snap->revision}, {"hash", snap->hash}};
    const bool garment = what == "garment" || what == "all";
    const bool pattern = what == "pattern" || what == "all";
    if (!garment && !pattern) return fail(400, "InvalidParameter", "what", "what must be garment, pattern or all");
    const Json doc = document_to_json(snap->doc, false);
    if (garment) {
        body["garment"] = doc["garment"];
        body["body"] = doc["body"];
    }
    if (pattern) {
        body["panels"] = doc["panels"];
        body["layout"] = layout_offsets(snap->doc);
    }
    if (what == "all") {
        body["seams"] = doc["seams"];
        body["symmetry"] = doc["symmetry"];
    }
    return {200, body};
}

Response SessionStore::apply(const std::string& id, std::string_view body) {
    const auto session = find(id);
    if (!session) return not_found(id);

    Json j;
    try {
        j = Json::parse(body.begin(), body.end());
    } catch (const Json::parse_error& e) {
        return fail(400, "ParseError", "byte " + std::to_string(e.byte), "malformed request body");
    }
    ScriptEntry entry;
    std::optional<long> expected;
    try {
        if (!j.is_object() || !j.contains("op")) {
            throw Error(ErrorCode::ValidationError, "body must be an object with an op record", "body");
        }
        entry.op = op_from_json(j.at("op"));
        if (j.contains("mirror")) {
            if (!j.at("mirror").is_boolean()) throw Error(ErrorCode::ValidationError, "mirror must be a boolean", "mirror");
            entry.mirror = j.at("mirror").get<bool>();
        }
        if (j.contains("revision")) {
            if (!j.at("revision").is_number_integer()) {
                throw Error(ErrorCode::ValidationError, "revision must be an integer", "revision");
            }
            expected = j.at("revision").get<long>();
        }
    } catch (const Error& e) {
        return fail(422, e);
    }

    std::lock_guard lock(session->edit);
    const auto snap = session->snapshot();
    if (expected && *expected != snap->revision) {
        return fail(409, "RevisionConflict", "session " + id,
                    "revision " + std::to_string(*expected) + " is stale; current is " + std::to_string(snap->revision));
    }
    EditOutcome outcome;
    try {
        outcome = apply_edit(snap->doc, entry.op, entry.mirror);
    } catch (const Error& e) {
        return fail(422, e);
    }

    Json traces = Json::array();
    for (const PanelTrace& t : outcome.traces) {
        Json energy = Json::array();
        for (double e : t.energy_trace) energy.push_back(round9(e));
        traces.push_back({{"panel", t.panel_id}, {"asap", t.asap}, {"energy", energy}});
    }
    Json out = {{"changed", changes(snap->doc, outcome.doc)},
                {"affected", outcome.affected},
                {"traces", traces},
                {"warnings", outcome.warnings}};
    session->log.push_back(entry);
    session->publish(std::move(outcome.doc), snap->revision + 1);
    const auto next = session->snapshot();
    out["revision"] = next->revision;
    out["hash"] = next->hash;
    return {200, out};
}

Response SessionStore::undo(const std::string& id) {
    const auto session = find(id);
    if (!session) return not_found(id);
    std::lock_guard lock(session->edit);
    const auto snap = session->snapshot();
    if (session->log.empty()) return fail(409, "EmptyHistory", "session " + id, "nothing to undo");

    GarmentDocument doc = session->base;
    try {
        for (std::size_t k = 0; k + 1 < session->log.size(); ++k) {
            doc = apply_edit(doc, session->log[k].op, session->log[k].mirror).doc;
        }
    } catch (const Error& e) {
        return fail(500, e);
    }
    session->log.pop_back();
    Json out = {{"changed", changes(snap->doc, doc)}};
    session->publish(std::move(doc), snap->revision + 1);
    const auto next = session->snapshot();
    out["revision"] = next->revision;
    out["hash"] = next->hash;
    return {200, out};
}

Response SessionStore::health() { return {200, {{"status", "ok"}}}; }

std::optional<GarmentDocument> SessionStore::document(const std::string& id) const {
    const auto session = find(id);
    if (!session) return std::nullopt;
    return session->snapshot()->doc;
}

struct Server::Impl {
    httplib::Server http;
    bool bound = false;
};

namespace {

void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

} // namespace

Server::Server(SessionStore& store) : impl_(std::make_unique<Impl>()) {
    auto& http = impl_->http;
    SessionStore& s = store;
    // SO_REUSEPORT (httplib's default) would let a second server share a busy port
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    http.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { send(res, SessionStore::health()); });
    http.Post("/sessions", [&s](const httplib::Request& req, httplib::Response& res) { send(res, s.create(req.body)); });
    http.Get(R"(/sessions/([0-9a-f]+)/state)", [&s](const httplib::Request& req, httplib::Response& res) {
        const std::string what = req.has_param("what") ? req.get_param_value("what") : "all";
        std::optional<long> revision;
        if (req.has_param("revision")) {
            try {
                revision = std::stol(req.get_param_value("revision"));
            } catch (const std::exception&) {
                send(res, {400, error_body("InvalidParameter", "revision", "revision must be an integer")});
                return;
            }
        }
        send(res, s.state(req.matches[1], what, revision));
    });
    http.Post(R"(/sessions/([0-9a-f]+)/ops)",
              [&s](const httplib::Request& req, httplib::Response& res) { send(res, s.apply(req.matches[1], req.body)); });
    http.Post(R"(/sessions/([0-9a-f]+)/undo)",
              [&s](const httplib::Request& req, httplib::Response& res) { send(res, s.undo(req.matches[1])); });
}

Server::~Server() { stop(); }

int Server::bind(int port) {
    if (port == 0) {
        const int p = impl_->http.bind_to_any_port("127.0.0.1");
        impl_->bound = p > 0;
        return impl_->bound ? p : -1;
    }
    impl_->bound = impl_->http.bind_to_port("127.0.0.1", port);
    return impl_->bound ? port : -1;
}

bool Server::listen() { return impl_->bound && impl_->http.listen_after_bind(); }

void Server::stop() {
    if (impl_->http.is_running()) impl_->http.stop();
}

} // namespace tailor::service
