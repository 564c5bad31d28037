#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arena/episode.hpp"
#include "arena/gateway.hpp"

namespace arena::harness {

/// What the policy is conditioned on besides the game state: the ordered
/// knowledge list injected into prompts, and the ablation flags.
struct PolicyContext {
    std::vector<std::string> knowledge;
    RunFlags flags;
};

struct AgentReply {
    std::vector<std::string> responses;  // all replies for the step, last one decisive
    std::optional<gateway::ChatExchange> exchange;
};

/// A policy for one or both games. Implementations must be safe to call from
/// several episode workers at once.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string id() const = 0;
    virtual AgentReply act_maze(const maze::MazeState& state, const PolicyContext& ctx) const;
    virtual AgentReply act_match2(const match2::MatchState& state, const PolicyContext& ctx) const;
};

/// Prompts a chat backend and re-asks with a format reminder when the reply
/// does not parse.
class LlmAgent : public Agent {
public:
    LlmAgent(std::shared_ptr<gateway::ChatBackend> backend, std::string id, int format_reasks = 2);

    std::string id() const override { return id_; }
    AgentReply act_maze(const maze::MazeState& state, const PolicyContext& ctx) const override;
    AgentReply act_match2(const match2::MatchState& state, const PolicyContext& ctx) const override;

private:
    AgentReply converse(const gateway::Prompt& prompt, const std::function<bool(const std::string&)>& parses) const;

    std::shared_ptr<gateway::ChatBackend> backend_;
    std::string id_;
    int format_reasks_;
};

/// Shortest-path planner over the rendered map it is shown. With full vision it
/// searches the 12-action move graph on the true map; under fog it treats
/// unexplored cells as open and walks one cell at a time.
class MazeBfsAgent : public Agent {
public:
    std::string id() const override { return "bfs"; }
    AgentReply act_maze(const maze::MazeState& state, const PolicyContext& ctx) const override;
};

/// Fog-aware explorer: collects visible coins, expands the nearest frontier and
/// heads for the goal when the remaining budget gets tight.
class MazeFrontierAgent : public Agent {
public:
    explicit MazeFrontierAgent(int goal_margin = 10) : goal_margin_(goal_margin) {}
    std::string id() const override { return "frontier"; }
    AgentReply act_maze(const maze::MazeState& state, const PolicyContext& ctx) const override;

private:
    int goal_margin_;
};

/// Eliminates the largest group each step (first in row-major order on ties).
class Match2GreedyAgent : public Agent {
public:
    std::string id() const override { return "greedy"; }
    AgentReply act_match2(const match2::MatchState& state, const PolicyContext& ctx) const override;
};

/// Wraps callables; used for scripted mocks.
class FunctionAgent : public Agent {
public:
    using MazeFn = std::function<std::string(const maze::MazeState&, const PolicyContext&)>;
    using Match2Fn = std::function<std::string(const match2::MatchState&, const PolicyContext&)>;

    FunctionAgent(std::string id, MazeFn maze, Match2Fn match2 = {})
        : id_(std::move(id)), maze_(std::move(maze)), match2_(std::move(match2)) {}

    std::string id() const override { return id_; }
    AgentReply act_maze(const maze::MazeState& state, const PolicyContext& ctx) const override;
    AgentReply act_match2(const match2::MatchState& state, const PolicyContext& ctx) const override;

private:
    std::string id_;
    MazeFn maze_;
    Match2Fn match2_;
};

/// Next action of the shortest move sequence to target on the given belief
/// rows (as produced by maze::render_rows). Exposed for tests.
struct MazePlan {
    int first_action = -1;
    int length = -1;  // number of actions; -1 when unreachable
};

/// Action-space search on a fully known map: each of the 12 actions slides up
/// to three cells and is usable only if every crossed cell is open.
MazePlan plan_full_vision(const std::vector<std::string>& rows, Pos from, Pos target, bool goal_blocked);

/// Factory for the CLI: "bfs", "frontier", "greedy" or "llm".
std::shared_ptr<Agent> make_agent(const std::string& name, std::shared_ptr<gateway::ChatBackend> backend = nullptr);

}  // namespace arena::harness
