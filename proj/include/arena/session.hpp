#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "arena/episode.hpp"

namespace arena::session {

using TimePoint = std::chrono::steady_clock::time_point;
using Clock = std::function<TimePoint()>;

inline constexpr std::chrono::minutes kIdleTimeout{30};
inline constexpr int kPayloadSchema = 1;
inline constexpr const char* kHumanAgentId = "human";

struct SessionOptions {
    std::filesystem::path log_dir;  // finished episodes are written here; empty = keep in memory only
    std::chrono::steady_clock::duration idle_timeout = kIdleTimeout;
    Clock clock;                    // defaults to steady_clock::now
};

/// Live games keyed by an opaque id. Requests for one session run one at a
/// time; different sessions proceed in parallel.
class SessionManager {
public:
    explicit SessionManager(SessionOptions options = {});
    ~SessionManager();

    /// {"game", "level", "seed"?} -> {"session_id", "seed", "state"}.
    nlohmann::json create(const nlohmann::json& request);
    /// Fog-respecting snapshot; repeated calls without actions are identical.
    nlohmann::json state(const std::string& id);
    /// Maze: {"action": 0..11}. Match-2: {"action": {...}} or {"action": null}.
    /// Returns {"events", "reward_delta", "terminal", "state"}.
    nlohmann::json act(const std::string& id, const nlohmann::json& payload);
    /// The session's episode log as JSON lines (finished or not).
    std::string log_text(const std::string& id);

    /// Finalizes sessions idle for longer than the timeout. Returns how many.
    int sweep();
    std::size_t size() const;

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& id);
    void finish(Session& s);
    bool expire_if_idle(Session& s, TimePoint now);
    TimePoint now() const;

    SessionOptions options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Error body used by every route: {"error": {"code", "message"}}.
nlohmann::json error_body(ErrorCode code, const std::string& message);
int http_status(ErrorCode code);

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Routes one request without any socket; the HTTP server delegates here.
HttpReply handle(SessionManager& manager, const std::string& method, const std::string& path, const std::string& body);

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 = pick a free port
    std::filesystem::path ui_dir;  // static files mounted at "/" when set
};

/// cpp-httplib front end for SessionManager.
class Server {
public:
    Server(SessionManager& manager, ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and serves on a background thread; returns the bound port.
    int start();
    /// Binds and serves on the calling thread until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace arena::session
