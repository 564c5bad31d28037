#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arena/common.hpp"
#include "arena/gateway.hpp"
#include "arena/level_gen.hpp"
#include "arena/maze.hpp"
#include "arena/match2.hpp"

namespace arena::harness {

inline constexpr int kLogSchemaVersion = 1;

/// Ablation switches: full_vision lifts the maze fog, no_props empties the
/// match-2 inventory.
struct RunFlags {
    bool full_vision = false;
    bool no_props = false;
    bool operator==(const RunFlags&) const = default;
};

struct StepRecord {
    int index = 0;
    std::string observation;
    std::optional<gateway::ChatExchange> exchange;
    std::vector<std::string> responses;  // every model/agent reply for this step; the last one decided it
    std::string kind;                    // "action", "invalid", "rejected" or "noop"
    nlohmann::json action;               // maze: id; match-2: inner action object; null if nothing parsed
    std::string error;                   // engine error code for "rejected"
    int reward_delta = 0;
    std::vector<std::string> events;
    int score_after = 0;
    std::string digest;
};

struct LogHeader {
    Game game = Game::Maze;
    Level level = Level::Easy;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string agent_id;
    RunFlags flags;
    nlohmann::json config;
};

struct LogTerminal {
    std::string status;        // engine status, or "aborted"
    bool aborted = false;      // backend failure; excluded from aggregates
    std::string finalized_by;  // "", "timeout" or "safety_cap"
    std::string reason;
    nlohmann::json metrics;    // metric snapshot; null when aborted
};

struct EpisodeLog {
    LogHeader header;
    std::vector<StepRecord> steps;
    LogTerminal terminal;

    std::string episode_id() const;

    /// JSON lines: header, one line per step, terminal.
    std::string to_jsonl() const;
    static EpisodeLog from_jsonl(std::string_view text);
};

std::string config_hash(const nlohmann::json& config);

EpisodeLog read_log(const std::string& path);
void write_log(const std::string& path, const EpisodeLog& log);

/// Drives one maze episode and records it. Shared by the harness, replay and
/// the session service so every path produces the same log.
class MazeEpisode {
public:
    MazeEpisode(const maze::MazeConfig& config, std::uint64_t seed, std::string agent_id, RunFlags flags);

    const maze::MazeState& state() const { return state_; }
    bool done() const { return state_.terminal() || aborted_; }
    std::string observation() const { return maze::observe(state_, flags_.full_vision); }
    const RunFlags& flags() const { return flags_; }

    /// nullopt = unparseable reply, charged as an invalid action.
    const StepRecord& step(std::optional<int> action_id, std::vector<std::string> responses = {},
                           std::optional<gateway::ChatExchange> exchange = std::nullopt);
    void abort(const std::string& reason);
    void expire();  // idle timeout: finalize as step-exhausted

    EpisodeLog log() const;

private:
    maze::MazeState state_;
    RunFlags flags_;
    EpisodeLog log_;
    bool aborted_ = false;
};

class Match2Episode {
public:
    Match2Episode(const level_gen::Match2Config& config, std::string agent_id, RunFlags flags);

    const match2::MatchState& state() const { return state_; }
    bool done() const { return state_.terminal() || aborted_; }
    std::string observation() const { return gateway::match2_state_block(state_); }
    const RunFlags& flags() const { return flags_; }
    int decisions() const { return static_cast<int>(log_.steps.size()); }

    /// Earlier entries of responses are counted as failed calls (format re-asks).
    /// Engine rejections are recorded, not thrown; they consume no step.
    const StepRecord& step(const gateway::Match2Parse& parsed, std::vector<std::string> responses = {},
                           std::optional<gateway::ChatExchange> exchange = std::nullopt);
    void abort(const std::string& reason);
    void expire();
    void stop_at_safety_cap();

    EpisodeLog log() const;

private:
    void finalize(const std::string& finalized_by);

    match2::MatchState state_;
    RunFlags flags_;
    EpisodeLog log_;
    bool aborted_ = false;
};

/// Terminal metrics of a finished log as a flat JSON object.
nlohmann::json metrics_of(const EpisodeLog& log);

}  // namespace arena::harness
