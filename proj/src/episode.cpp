#include "arena/episode.hpp"

#include <fstream>
#include <sstream>

namespace arena::harness {

using nlohmann::json;

namespace {

json flags_json(const RunFlags& f) { return json{{"full_vision", f.full_vision}, {"no_props", f.no_props}}; }

RunFlags flags_from(const json& j) { return {j.value("full_vision", false), j.value("no_props", false)}; }

json step_json(const StepRecord& s) {
    json j{{"type", "step"},
           {"index", s.index},
           {"observation", s.observation},
           {"exchange", s.exchange ? gateway::to_json(*s.exchange) : json(nullptr)},
           {"responses", s.responses},
           {"kind", s.kind},
           {"action", s.action},
           {"reward_delta", s.reward_delta},
           {"events", s.events},
           {"score_after", s.score_after},
           {"digest", s.digest}};
    if (!s.error.empty()) j["error"] = s.error;
    return j;
}

StepRecord step_from(const json& j) {
    StepRecord s;
    s.index = j.at("index").get<int>();
    s.observation = j.value("observation", "");
    if (j.contains("exchange") && !j["exchange"].is_null()) s.exchange = gateway::chat_exchange_from_json(j["exchange"]);
    s.responses = j.value("responses", std::vector<std::string>{});
    s.kind = j.at("kind").get<std::string>();
    s.action = j.value("action", json(nullptr));
    s.error = j.value("error", "");
    s.reward_delta = j.at("reward_delta").get<int>();
    s.events = j.value("events", std::vector<std::string>{});
    s.score_after = j.at("score_after").get<int>();
    s.digest = j.value("digest", "");
    return s;
}

LogHeader make_header(Game game, Level level, std::uint64_t seed, json config, std::string agent_id, RunFlags flags) {
    LogHeader h;
    h.game = game;
    h.level = level;
    h.seed = seed;
    h.config_hash = config_hash(config);
    h.config = std::move(config);
    h.agent_id = std::move(agent_id);
    h.flags = flags;
    return h;
}

}  // namespace

std::string config_hash(const json& config) { return fnv1a_hex(config.dump()); }

std::string EpisodeLog::episode_id() const {
    return header.agent_id + ":" + std::string(to_string(header.game)) + ":" + std::string(to_string(header.level)) +
           ":" + std::to_string(header.seed);
}

std::string EpisodeLog::to_jsonl() const {
    std::string out;
    const json head{{"type", "header"},
                    {"schema", kLogSchemaVersion},
                    {"game", to_string(header.game)},
                    {"level", to_string(header.level)},
                    {"seed", header.seed},
                    {"config_hash", header.config_hash},
                    {"agent_id", header.agent_id},
                    {"flags", flags_json(header.flags)},
                    {"config", header.config}};
    out += head.dump() + "\n";
    for (const auto& s : steps) out += step_json(s).dump() + "\n";
    json term{{"type", "terminal"},
              {"status", terminal.status},
              {"aborted", terminal.aborted},
              {"finalized_by", terminal.finalized_by},
              {"metrics", terminal.metrics}};
    if (!terminal.reason.empty()) term["reason"] = terminal.reason;
    out += term.dump() + "\n";
    return out;
}

EpisodeLog EpisodeLog::from_jsonl(std::string_view text) {
    EpisodeLog log;
    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_header = false;
    bool saw_terminal = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        const std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            if (j.value("schema", 0) != kLogSchemaVersion)
                throw GameError(ErrorCode::InvalidConfig, "unsupported log schema version");
            log.header.game = parse_game(j.at("game").get<std::string>());
            log.header.level = parse_level(j.at("level").get<std::string>());
            log.header.seed = j.at("seed").get<std::uint64_t>();
            log.header.config_hash = j.at("config_hash").get<std::string>();
            log.header.agent_id = j.at("agent_id").get<std::string>();
            log.header.flags = flags_from(j.at("flags"));
            log.header.config = j.at("config");
            saw_header = true;
        } else if (type == "step") {
            log.steps.push_back(step_from(j));
        } else if (type == "terminal") {
            log.terminal.status = j.at("status").get<std::string>();
            log.terminal.aborted = j.value("aborted", false);
            log.terminal.finalized_by = j.value("finalized_by", "");
            log.terminal.reason = j.value("reason", "");
            log.terminal.metrics = j.value("metrics", json(nullptr));
            saw_terminal = true;
        } else {
            throw GameError(ErrorCode::InvalidConfig, "unknown log line type '" + type + "'");
        }
    }
    if (!saw_header || !saw_terminal) throw GameError(ErrorCode::InvalidConfig, "log lacks a header or terminal line");
    return log;
}

EpisodeLog read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GameError(ErrorCode::InvalidConfig, "cannot open log " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return EpisodeLog::from_jsonl(buf.str());
}

void write_log(const std::string& path, const EpisodeLog& log) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GameError(ErrorCode::InvalidConfig, "cannot write log " + path);
    out << log.to_jsonl();
}

// ---------------------------------------------------------------------------

MazeEpisode::MazeEpisode(const maze::MazeConfig& config, std::uint64_t seed, std::string agent_id, RunFlags flags)
    : state_(maze::init(config, seed)), flags_(flags) {
    log_.header = make_header(Game::Maze, config.level, seed, maze::to_json(config), std::move(agent_id), flags);
}

const StepRecord& MazeEpisode::step(std::optional<int> action_id, std::vector<std::string> responses,
                                    std::optional<gateway::ChatExchange> exchange) {
    if (done()) throw GameError(ErrorCode::TerminalEpisode, "maze episode already terminal");
    StepRecord rec;
    rec.index = static_cast<int>(log_.steps.size());
    rec.observation = observation();
    rec.exchange = std::move(exchange);
    rec.responses = std::move(responses);

    maze::MazeTransition t = action_id ? maze::apply_action_id(state_, *action_id) : maze::apply_invalid(state_);
    rec.kind = action_id ? "action" : "invalid";
    rec.action = action_id ? json(*action_id) : json(nullptr);
    rec.reward_delta = t.result.reward_delta;
    for (const auto& e : t.result.events) rec.events.push_back(maze::to_string(e));
    state_ = std::move(t.state);
    rec.score_after = state_.score;
    rec.digest = maze::digest(state_);
    log_.steps.push_back(std::move(rec));
    return log_.steps.back();
}

void MazeEpisode::abort(const std::string& reason) {
    aborted_ = true;
    log_.terminal.reason = reason;
}

void MazeEpisode::expire() {
    if (state_.terminal()) return;
    state_ = maze::force_exhaust(state_);
    log_.terminal.finalized_by = "timeout";
}

EpisodeLog MazeEpisode::log() const {
    EpisodeLog out = log_;
    if (aborted_) {
        out.terminal.status = "aborted";
        out.terminal.aborted = true;
        out.terminal.metrics = nullptr;
    } else {
        out.terminal.status = std::string(maze::to_string(state_.status));
        if (state_.terminal()) {
            out.terminal.metrics = maze::to_json(maze::metrics_snapshot(state_));
            out.terminal.metrics["explor_nonwall"] =
                maze::metrics_snapshot(state_, maze::ExplorBasis::NonWallCells).explor;
        } else {
            out.terminal.metrics = nullptr;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Match2Episode::Match2Episode(const level_gen::Match2Config& config, std::string agent_id, RunFlags flags)
    : state_(level_gen::init_match2(config, flags.no_props)), flags_(flags) {
    log_.header =
        make_header(Game::Match2, config.level, config.seed, level_gen::to_json(config), std::move(agent_id), flags);
}

const StepRecord& Match2Episode::step(const gateway::Match2Parse& parsed, std::vector<std::string> responses,
                                      std::optional<gateway::ChatExchange> exchange) {
    if (done()) throw GameError(ErrorCode::TerminalEpisode, "match-2 episode already terminal");
    StepRecord rec;
    rec.index = static_cast<int>(log_.steps.size());
    rec.observation = observation();
    rec.exchange = std::move(exchange);
    if (responses.empty()) responses.emplace_back();
    for (std::size_t i = 0; i + 1 < responses.size(); ++i) match2::record_call(state_, false);
    rec.responses = std::move(responses);

    const int score_before = state_.score;
    if (const auto* action = std::get_if<match2::MatchAction>(&parsed)) {
        rec.action = match2::action_to_json(*action);
        try {
            match2::MatchTransition t = match2::apply_action(state_, *action);
            state_ = std::move(t.state);
            match2::record_call(state_, true);
            rec.kind = "action";
            for (int c = 0; c < match2::kColors; ++c)
                if (t.result.cleared[c] > 0)
                    rec.events.push_back(std::string("Cleared(") + match2::glyph(static_cast<match2::Color>(c)) + "," +
                                         std::to_string(t.result.cleared[c]) + ")");
        } catch (const GameError& e) {
            match2::record_call(state_, false);
            rec.kind = "rejected";
            rec.error = std::string(to_string(e.code()));
            rec.events.push_back("Rejected(" + rec.error + ")");
        }
    } else if (std::holds_alternative<gateway::NoAction>(parsed)) {
        match2::record_call(state_, true);
        state_ = match2::forfeit(state_);
        rec.kind = "noop";
        rec.events.push_back("Forfeit");
    } else {
        match2::record_call(state_, false);
        rec.kind = "invalid";
        rec.events.push_back("ParseFailure");
    }
    rec.reward_delta = state_.score - score_before;
    rec.score_after = state_.score;
    rec.digest = match2::digest(state_);
    log_.steps.push_back(std::move(rec));
    return log_.steps.back();
}

void Match2Episode::abort(const std::string& reason) {
    aborted_ = true;
    log_.terminal.reason = reason;
}

void Match2Episode::finalize(const std::string& finalized_by) {
    if (state_.terminal()) return;
    state_ = match2::forfeit(state_);
    log_.terminal.finalized_by = finalized_by;
}

void Match2Episode::expire() { finalize("timeout"); }
void Match2Episode::stop_at_safety_cap() { finalize("safety_cap"); }

EpisodeLog Match2Episode::log() const {
    EpisodeLog out = log_;
    if (aborted_) {
        out.terminal.status = "aborted";
        out.terminal.aborted = true;
        out.terminal.metrics = nullptr;
    } else {
        out.terminal.status = std::string(match2::to_string(state_.status));
        out.terminal.metrics = state_.terminal() ? match2::to_json(match2::metrics_snapshot(state_)) : json(nullptr);
    }
    return out;
}

json metrics_of(const EpisodeLog& log) { return log.terminal.metrics; }

}  // namespace arena::harness
