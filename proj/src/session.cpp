#include "arena/session.hpp"

#include <random>
#include <sstream>

#include "arena/level_gen.hpp"

namespace arena::session {

using nlohmann::json;

struct SessionManager::Session {
    std::mutex mutex;
    std::string id;
    Game game = Game::Maze;
    Level level = Level::Easy;
    std::uint64_t seed = 0;
    std::optional<harness::MazeEpisode> maze;
    std::optional<harness::Match2Episode> match2;
    TimePoint created;
    TimePoint last_activity;
    bool finished = false;

    bool done() const { return maze ? maze->done() : match2->done(); }
    harness::EpisodeLog log() const { return maze ? maze->log() : match2->log(); }
};

namespace {

std::string random_id() {
    static std::mutex m;
    static std::mt19937_64 gen{std::random_device{}()};
    std::lock_guard lock(m);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(gen()),
                  static_cast<unsigned long long>(gen()));
    return buf;
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32 | rd()) & 0xffffffffffffULL;
}

json pos_json(Pos p) { return json::array({p.row, p.col}); }

json colour_counts(const std::array<int, match2::kColors>& counts) {
    json j = json::object();
    for (int c = 0; c < match2::kColors; ++c) j[std::string(1, match2::glyph(static_cast<match2::Color>(c)))] = counts[c];
    return j;
}

// Only what the player may see: rendered cells, never the hidden grid or the
// positions of monsters in the fog.
json maze_payload(const harness::MazeEpisode& ep) {
    const maze::MazeState& s = ep.state();
    const bool full = ep.flags().full_vision;
    json j{{"game", "maze"},
           {"level", to_string(s.level)},
           {"status", maze::to_string(s.status)},
           {"grid", maze::render_rows(s, full)},
           {"observation", ep.observation()},
           {"agent", pos_json(s.agent)},
           {"score", s.score},
           {"lives", s.lives},
           {"steps_used", s.steps_used},
           {"max_steps", s.max_steps},
           {"steps_remaining", s.max_steps - s.steps_used},
           {"coins_collected", s.coins_collected},
           {"inventory",
            {{"sword", s.has_sword}, {"magnet", s.has_magnet}, {"key", s.has_key}, {"pickaxe", s.pickaxe_uses}}}};
    return j;
}

json match2_payload(const harness::Match2Episode& ep) {
    const match2::MatchState& s = ep.state();
    return json{{"game", "match2"},
                {"status", match2::to_string(s.status)},
                {"board", match2::board_to_rows(s.board)},
                {"score", s.score},
                {"steps_remaining", s.steps_remaining},
                {"max_steps", s.max_steps},
                {"inventory",
                 {{"row", s.inventory.row}, {"col", s.inventory.col}, {"bomb", s.inventory.bomb},
                  {"hammer", s.inventory.hammer}}},
                {"targets", colour_counts(s.targets)},
                {"eliminated", colour_counts(s.eliminated)}};
}

}  // namespace

SessionManager::SessionManager(SessionOptions options) : options_(std::move(options)) {
    if (!options_.clock) options_.clock = [] { return std::chrono::steady_clock::now(); };
    if (!options_.log_dir.empty()) std::filesystem::create_directories(options_.log_dir);
}

SessionManager::~SessionManager() = default;

TimePoint SessionManager::now() const { return options_.clock(); }

std::size_t SessionManager::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw GameError(ErrorCode::SessionNotFound, "no session '" + id + "'");
    return it->second;
}

void SessionManager::finish(Session& s) {
    if (s.finished) return;
    s.finished = true;
    if (!options_.log_dir.empty()) harness::write_log((options_.log_dir / (s.id + ".jsonl")).string(), s.log());
}

bool SessionManager::expire_if_idle(Session& s, TimePoint t) {
    if (s.finished || t - s.last_activity <= options_.idle_timeout) return false;
    if (s.maze) s.maze->expire();
    else s.match2->expire();
    finish(s);
    return true;
}

namespace {

json snapshot(const std::string& id, std::uint64_t seed, bool finished, const harness::EpisodeLog& log,
              json payload) {
    payload["schema"] = kPayloadSchema;
    payload["session_id"] = id;
    payload["seed"] = seed;
    payload["finished"] = finished;
    if (!log.terminal.metrics.is_null()) payload["metrics"] = log.terminal.metrics;
    return payload;
}

}  // namespace

json SessionManager::create(const json& request) {
    if (!request.is_object()) throw GameError(ErrorCode::InvalidConfig, "request body must be a JSON object");
    if (!request.contains("game") || !request["game"].is_string())
        throw GameError(ErrorCode::InvalidLevel, "missing game name");
    if (!request.contains("level") || !request["level"].is_string())
        throw GameError(ErrorCode::InvalidLevel, "missing level name");
    const Game game = parse_game(request["game"].get<std::string>());
    const Level level = parse_level(request["level"].get<std::string>());
    std::uint64_t seed = 0;
    if (request.contains("seed") && !request["seed"].is_null()) {
        if (!request["seed"].is_number_unsigned() && !(request["seed"].is_number_integer() && request["seed"] >= 0))
            throw GameError(ErrorCode::InvalidConfig, "seed must be a non-negative integer");
        seed = request["seed"].get<std::uint64_t>();
    } else {
        seed = random_seed();
    }

    auto s = std::make_shared<Session>();
    s->id = random_id();
    s->game = game;
    s->level = level;
    s->seed = seed;
    const level_gen::Instance inst = level_gen::make_instance(game, level, seed);
    if (game == Game::Maze) s->maze.emplace(inst.maze(), seed, kHumanAgentId, harness::RunFlags{});
    else s->match2.emplace(inst.match2(), kHumanAgentId, harness::RunFlags{});
    s->created = s->last_activity = now();

    json state = snapshot(s->id, seed, false, s->log(), s->maze ? maze_payload(*s->maze) : match2_payload(*s->match2));
    {
        std::lock_guard lock(mutex_);
        sessions_.emplace(s->id, s);
    }
    return json{{"session_id", s->id}, {"seed", seed}, {"state", std::move(state)}};
}

json SessionManager::state(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    expire_if_idle(*s, now());
    return snapshot(s->id, s->seed, s->finished, s->log(), s->maze ? maze_payload(*s->maze) : match2_payload(*s->match2));
}

json SessionManager::act(const std::string& id, const json& payload) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    const TimePoint t = now();
    expire_if_idle(*s, t);
    if (s->finished) throw GameError(ErrorCode::SessionFinished, "session '" + id + "' has finished");
    if (!payload.is_object() || !payload.contains("action"))
        throw GameError(ErrorCode::MalformedAction, "body must be {\"action\": ...}");

    const std::string raw = payload.dump();
    const harness::StepRecord* rec = nullptr;
    if (s->maze) {
        const json& a = payload["action"];
        if (!a.is_number_integer() || a.get<long long>() < 0 || a.get<long long>() > 11)
            throw GameError(ErrorCode::MalformedAction, "maze action must be an integer id 0..11");
        rec = &s->maze->step(a.get<int>(), {raw});
    } else {
        const gateway::Match2Parse parsed = gateway::parse_match2_action(raw);
        if (const auto* failure = std::get_if<gateway::ParseFailure>(&parsed))
            throw GameError(ErrorCode::MalformedAction, failure->reason);
        if (const auto* action = std::get_if<match2::MatchAction>(&parsed)) {
            try {
                (void)match2::apply_action(s->match2->state(), *action);
            } catch (const GameError&) {
                // Recorded so the log shows the attempt, then reported to the caller.
                s->match2->step(parsed, {raw});
                s->last_activity = t;
                throw;
            }
        }
        rec = &s->match2->step(parsed, {raw});
    }
    s->last_activity = t;
    json result{{"events", rec->events}, {"reward_delta", rec->reward_delta}};
    if (s->done()) finish(*s);
    result["terminal"] = s->finished;
    result["state"] =
        snapshot(s->id, s->seed, s->finished, s->log(), s->maze ? maze_payload(*s->maze) : match2_payload(*s->match2));
    return result;
}

std::string SessionManager::log_text(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    expire_if_idle(*s, now());
    return s->log().to_jsonl();
}

int SessionManager::sweep() {
    std::vector<std::shared_ptr<Session>> all;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [id, s] : sessions_) all.push_back(s);
    }
    int expired = 0;
    const TimePoint t = now();
    for (const auto& s : all) {
        std::lock_guard lock(s->mutex);
        expired += expire_if_idle(*s, t) ? 1 : 0;
    }
    return expired;
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

json error_body(ErrorCode code, const std::string& message) {
    return json{{"error", {{"code", to_string(code)}, {"message", message}}}};
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::SessionNotFound: return 404;
        case ErrorCode::SessionFinished:
        case ErrorCode::TerminalEpisode: return 409;
        case ErrorCode::InvalidTarget:
        case ErrorCode::OutOfProp:
        case ErrorCode::OutOfRange: return 422;
        case ErrorCode::InvalidLevel:
        case ErrorCode::MalformedAction:
        case ErrorCode::InvalidConfig:
        case ErrorCode::ParseFailure: return 400;
        default: return 500;
    }
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path.substr(0, path.find('?'))) {
        if (c == '/') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

HttpReply json_reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }

json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw GameError(ErrorCode::MalformedAction, "request body is not valid JSON");
    return j;
}

}  // namespace

HttpReply handle(SessionManager& manager, const std::string& method, const std::string& path, const std::string& body) {
    const auto parts = split_path(path);
    try {
        if (parts.empty() || parts[0] != "sessions")
            return json_reply(404, json{{"error", {{"code", "NotFound"}, {"message", "no route " + path}}}});
        if (parts.size() == 1 && method == "POST") return json_reply(201, manager.create(parse_body(body)));
        if (parts.size() == 2 && method == "GET") return json_reply(200, manager.state(parts[1]));
        if (parts.size() == 3 && parts[2] == "actions" && method == "POST")
            return json_reply(200, manager.act(parts[1], parse_body(body)));
        if (parts.size() == 3 && parts[2] == "log" && method == "GET")
            return {200, manager.log_text(parts[1]), "application/x-ndjson"};
        return json_reply(405, json{{"error", {{"code", "MethodNotAllowed"}, {"message", method + " " + path}}}});
    } catch (const GameError& e) {
        return json_reply(http_status(e.code()), error_body(e.code(), e.what()));
    } catch (const std::exception& e) {
        return json_reply(500, json{{"error", {{"code", "Internal"}, {"message", e.what()}}}});
    }
}

}  // namespace arena::session
