#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tailor/document.hpp"
#include "tailor/io.hpp"

namespace tailor::service {

// Coordinates moving less than this are left out of change sets.
inline constexpr double kDeltaEpsilon = 1e-9;

struct Response {
    int status = 200;
    Json body;
};

// {code, entity, message}
[[nodiscard]] Json error_body(std::string_view code, std::string_view entity, std::string_view message);

// Session bookkeeping independent of any transport. Every call is safe to make
// from several threads; mutations of one session run one at a time.
class SessionStore {
public:
    SessionStore();
    ~SessionStore();

    Response create(std::string_view document_bytes);
    // `what` is garment, pattern or all. A set `revision` must equal the
    // session's current one.
    Response state(const std::string& id, std::string_view what, std::optional<long> revision = std::nullopt);
    // Body: {"op": <op record>, "mirror": bool, "revision": optional int}.
    Response apply(const std::string& id, std::string_view body);
    Response undo(const std::string& id);
    static Response health();

    // Current document of a session, for tests and replay checks.
    [[nodiscard]] std::optional<GarmentDocument> document(const std::string& id) const;

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& id) const;

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::function<std::string()> next_id_;
};

// Default left-to-right placement of panels (2 cm gaps), as (id, dx, dy).
[[nodiscard]] Json layout_offsets(const GarmentDocument& doc);

// HTTP front end over a SessionStore, bound to 127.0.0.1.
class Server {
public:
    explicit Server(SessionStore& store);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Binds `port` (0 picks a free one). Returns the bound port or -1.
    int bind(int port);
    // Serves until stop(); requires a successful bind().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace tailor::service
