#include "arena/agents.hpp"

#include <array>
#include <deque>

namespace arena::harness {

namespace {

using maze::Direction;

constexpr std::array<Direction, 4> kDirs = {Direction::Up, Direction::Down, Direction::Left, Direction::Right};

char at(const std::vector<std::string>& rows, Pos p) { return rows[p.row][p.col]; }

std::optional<Pos> find_glyph(const std::vector<std::string>& rows, char ch) {
    for (int r = 0; r < maze::kSize; ++r)
        for (int c = 0; c < maze::kSize; ++c)
            if (rows[r][c] == ch) return Pos{r, c};
    return std::nullopt;
}

int action_id(Direction d, int magnitude) { return maze::MazeAction{d, magnitude}.id(); }

std::string reply_for(int id) { return "Action: " + std::to_string(id); }

// Single-cell BFS from `from`; first[] holds the direction of the first move.
struct CellSearch {
    std::array<std::array<int, maze::kSize>, maze::kSize> dist{};
    std::array<std::array<int, maze::kSize>, maze::kSize> first{};
};

template <typename Passable>
CellSearch cell_bfs(Pos from, Passable passable) {
    CellSearch s;
    for (auto& row : s.dist) row.fill(-1);
    for (auto& row : s.first) row.fill(-1);
    s.dist[from.row][from.col] = 0;
    std::deque<Pos> q{from};
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        for (Direction d : kDirs) {
            const Pos n = maze::step_toward(p, d);
            if (!maze::in_bounds(n) || s.dist[n.row][n.col] >= 0 || !passable(n)) continue;
            s.dist[n.row][n.col] = s.dist[p.row][p.col] + 1;
            s.first[n.row][n.col] = p == from ? static_cast<int>(d) : s.first[p.row][p.col];
            // passable cells that end the episode (the goal) are reached but not expanded
            if (!passable.expand(n)) continue;
            q.push_back(n);
        }
    }
    return s;
}

// Passability over a rendered map. Unknown cells count as open when
// optimistic; cells next to a visible monster are avoided when cautious.
struct BeliefPassable {
    const std::vector<std::string>* rows;
    bool optimistic = true;
    bool goal_open = true;
    bool cautious = false;

    bool monster_adjacent(Pos p) const {
        for (Direction d : kDirs) {
            const Pos n = maze::step_toward(p, d);
            if (maze::in_bounds(n) && at(*rows, n) == 'M') return true;
        }
        return false;
    }
    bool operator()(Pos p) const {
        const char ch = at(*rows, p);
        if (ch == '#' || ch == 'M') return false;
        if (ch == '?' && !optimistic) return false;
        if (ch == 'G' && !goal_open) return false;
        if (cautious && monster_adjacent(p)) return false;
        return true;
    }
    bool expand(Pos p) const { return at(*rows, p) != 'G'; }
};

std::optional<std::string> step_toward_best(const CellSearch& s, const std::vector<Pos>& targets) {
    int best = -1;
    Pos pick{};
    for (Pos t : targets) {
        const int d = s.dist[t.row][t.col];
        if (d > 0 && (best < 0 || d < best)) {
            best = d;
            pick = t;
        }
    }
    if (best < 0) return std::nullopt;
    return reply_for(action_id(static_cast<Direction>(s.first[pick.row][pick.col]), 1));
}

// Tries cautious (monster-avoiding) search first, then plain.
std::optional<std::string> route(const std::vector<std::string>& rows, Pos from, const std::vector<Pos>& targets,
                                 bool optimistic, bool goal_open) {
    for (bool cautious : {true, false}) {
        BeliefPassable pass{&rows, optimistic, goal_open, cautious};
        // targets themselves stay enterable even if next to a monster
        auto passable = [&](Pos p) {
            if (std::find(targets.begin(), targets.end(), p) != targets.end()) {
                BeliefPassable plain{&rows, optimistic, goal_open, false};
                return plain(p);
            }
            return pass(p);
        };
        struct Wrapped {
            decltype(passable)& fn;
            const BeliefPassable& base;
            bool operator()(Pos p) const { return fn(p); }
            bool expand(Pos p) const { return base.expand(p); }
        } wrapped{passable, pass};
        if (auto r = step_toward_best(cell_bfs(from, wrapped), targets)) return r;
    }
    return std::nullopt;
}

std::vector<Pos> cells_with(const std::vector<std::string>& rows, std::string_view glyphs) {
    std::vector<Pos> out;
    for (int r = 0; r < maze::kSize; ++r)
        for (int c = 0; c < maze::kSize; ++c)
            if (glyphs.find(rows[r][c]) != std::string_view::npos) out.push_back({r, c});
    return out;
}

// Known open cells with an unexplored neighbour.
std::vector<Pos> frontier_cells(const std::vector<std::string>& rows) {
    std::vector<Pos> out;
    for (int r = 0; r < maze::kSize; ++r)
        for (int c = 0; c < maze::kSize; ++c) {
            const char ch = rows[r][c];
            if (ch == '?' || ch == '#' || ch == 'M' || ch == 'G' || ch == 'A') continue;
            for (Direction d : kDirs) {
                const Pos n = maze::step_toward({r, c}, d);
                if (maze::in_bounds(n) && at(rows, n) == '?') {
                    out.push_back({r, c});
                    break;
                }
            }
        }
    return out;
}

std::string any_safe_move(const std::vector<std::string>& rows, Pos from) {
    for (Direction d : kDirs) {
        const Pos n = maze::step_toward(from, d);
        if (!maze::in_bounds(n)) continue;
        const char ch = at(rows, n);
        if (ch != '#' && ch != 'M' && ch != '?') return reply_for(action_id(d, 1));
    }
    return reply_for(0);
}

}  // namespace

AgentReply Agent::act_maze(const maze::MazeState&, const PolicyContext&) const {
    throw GameError(ErrorCode::InvalidConfig, "agent '" + id() + "' does not play the maze game");
}

AgentReply Agent::act_match2(const match2::MatchState&, const PolicyContext&) const {
    throw GameError(ErrorCode::InvalidConfig, "agent '" + id() + "' does not play the match-2 game");
}

// ---------------------------------------------------------------------------

LlmAgent::LlmAgent(std::shared_ptr<gateway::ChatBackend> backend, std::string id, int format_reasks)
    : backend_(std::move(backend)), id_(std::move(id)), format_reasks_(format_reasks) {
    if (!backend_) throw GameError(ErrorCode::InvalidConfig, "LlmAgent needs a backend");
}

AgentReply LlmAgent::converse(const gateway::Prompt& prompt,
                              const std::function<bool(const std::string&)>& parses) const {
    gateway::ChatRequest request{{{"system", prompt.system}, {"user", prompt.user}}};
    AgentReply reply;
    gateway::ChatExchange exchange{prompt.system, prompt.user, {}, 0.0, 0};
    for (int ask = 0; ask <= format_reasks_; ++ask) {
        const gateway::ChatResponse r = backend_->complete(request);
        reply.responses.push_back(r.text);
        exchange.latency_ms += r.latency_ms;
        exchange.attempts += r.attempts;
        exchange.response = r.text;
        if (parses(r.text)) break;
        request.messages.push_back({"assistant", r.text});
        request.messages.push_back({"user", std::string(gateway::kFormatReminder)});
    }
    reply.exchange = std::move(exchange);
    return reply;
}

AgentReply LlmAgent::act_maze(const maze::MazeState& state, const PolicyContext& ctx) const {
    const auto prompt =
        gateway::build_maze_prompt(state, ctx.knowledge, {ctx.flags.full_vision, ctx.flags.no_props});
    return converse(prompt, [](const std::string& t) { return gateway::parse_maze_action(t).has_value(); });
}

AgentReply LlmAgent::act_match2(const match2::MatchState& state, const PolicyContext& ctx) const {
    const auto prompt =
        gateway::build_match2_prompt(state, ctx.knowledge, {ctx.flags.full_vision, ctx.flags.no_props});
    return converse(prompt, [](const std::string& t) {
        return !std::holds_alternative<gateway::ParseFailure>(gateway::parse_match2_action(t));
    });
}

// ---------------------------------------------------------------------------

MazePlan plan_full_vision(const std::vector<std::string>& rows, Pos from, Pos target, bool goal_blocked) {
    auto open = [&](Pos p) {
        if (!maze::in_bounds(p)) return false;
        const char ch = at(rows, p);
        if (ch == '#' || ch == 'M' || ch == '?') return false;
        if (ch == 'G' && goal_blocked && p != target) return false;
        return true;
    };
    std::array<std::array<int, maze::kSize>, maze::kSize> dist{};
    std::array<std::array<int, maze::kSize>, maze::kSize> first{};
    for (auto& row : dist) row.fill(-1);
    dist[from.row][from.col] = 0;
    std::deque<Pos> q{from};
    while (!q.empty()) {
        const Pos p = q.front();
        q.pop_front();
        for (Direction d : kDirs) {
            Pos cur = p;
            for (int m = 1; m <= 3; ++m) {
                cur = maze::step_toward(cur, d);
                if (!open(cur)) break;
                const bool is_goal = at(rows, cur) == 'G';
                if (is_goal && cur != target) break;  // entering the goal would end the episode
                if (dist[cur.row][cur.col] < 0) {
                    dist[cur.row][cur.col] = dist[p.row][p.col] + 1;
                    first[cur.row][cur.col] = p == from ? action_id(d, m) : first[p.row][p.col];
                    if (cur == target) return {first[cur.row][cur.col], dist[cur.row][cur.col]};
                    q.push_back(cur);
                }
                if (cur == target) break;
            }
        }
    }
    return {};
}

AgentReply MazeBfsAgent::act_maze(const maze::MazeState& state, const PolicyContext& ctx) const {
    const auto rows = maze::render_rows(state, ctx.flags.full_vision);
    const bool goal_blocked = state.level == Level::Hard && !state.has_key;
    const auto goal = find_glyph(rows, 'G');
    std::optional<Pos> target = goal_blocked ? find_glyph(rows, 'K') : goal;

    if (ctx.flags.full_vision && target) {
        if (const MazePlan plan = plan_full_vision(rows, state.agent, *target, goal_blocked); plan.first_action >= 0)
            return {{reply_for(plan.first_action)}, std::nullopt};
    }
    if (target) {
        if (auto r = route(rows, state.agent, {*target}, true, !goal_blocked)) return {{*r}, std::nullopt};
    }
    if (auto r = route(rows, state.agent, frontier_cells(rows), false, false)) return {{*r}, std::nullopt};
    return {{any_safe_move(rows, state.agent)}, std::nullopt};
}

AgentReply MazeFrontierAgent::act_maze(const maze::MazeState& state, const PolicyContext& ctx) const {
    const auto rows = maze::render_rows(state, ctx.flags.full_vision);
    const bool goal_blocked = state.level == Level::Hard && !state.has_key;
    const auto goal = find_glyph(rows, 'G');
    const auto reply = [](std::string text) { return AgentReply{{std::move(text)}, std::nullopt}; };

    if (goal_blocked) {
        if (const auto key = find_glyph(rows, 'K')) {
            if (auto r = route(rows, state.agent, {*key}, false, false)) return reply(*r);
        }
    } else if (goal) {
        BeliefPassable optimistic{&rows, true, true, false};
        const CellSearch to_goal = cell_bfs(state.agent, optimistic);
        const int d_goal = to_goal.dist[goal->row][goal->col];
        const int remaining = state.max_steps - state.steps_used;
        if (d_goal >= 0 && remaining <= d_goal + goal_margin_) {
            if (auto r = route(rows, state.agent, {*goal}, true, true)) return reply(*r);
        }
    }
    if (auto r = route(rows, state.agent, cells_with(rows, "C"), false, false)) return reply(*r);
    if (auto r = route(rows, state.agent, frontier_cells(rows), false, false)) return reply(*r);
    if (goal && !goal_blocked) {
        if (auto r = route(rows, state.agent, {*goal}, true, true)) return reply(*r);
    }
    return reply(any_safe_move(rows, state.agent));
}

// ---------------------------------------------------------------------------

AgentReply Match2GreedyAgent::act_match2(const match2::MatchState& state, const PolicyContext&) const {
    const auto groups = match2::find_groups(state.board);
    const match2::Group* best = nullptr;
    for (const auto& g : groups)
        if (!best || g.cells.size() > best->cells.size()) best = &g;
    std::optional<match2::MatchAction> action;
    if (best) {
        action = match2::Eliminate{best->cells.front()};
    } else if (state.inventory.bomb > 0) {
        action = match2::Bomb{{3, 3}};
    } else if (state.inventory.row > 0) {
        action = match2::RowClear{7};
    } else if (state.inventory.col > 0) {
        action = match2::ColClear{0};
    } else if (state.inventory.hammer > 0) {
        action = match2::Hammer{{7, 0}};
    }
    return {{match2::format_action(action)}, std::nullopt};
}

// ---------------------------------------------------------------------------

AgentReply FunctionAgent::act_maze(const maze::MazeState& state, const PolicyContext& ctx) const {
    if (!maze_) return Agent::act_maze(state, ctx);
    return {{maze_(state, ctx)}, std::nullopt};
}

AgentReply FunctionAgent::act_match2(const match2::MatchState& state, const PolicyContext& ctx) const {
    if (!match2_) return Agent::act_match2(state, ctx);
    return {{match2_(state, ctx)}, std::nullopt};
}

std::shared_ptr<Agent> make_agent(const std::string& name, std::shared_ptr<gateway::ChatBackend> backend) {
    if (name == "bfs") return std::make_shared<MazeBfsAgent>();
    if (name == "frontier") return std::make_shared<MazeFrontierAgent>();
    if (name == "greedy") return std::make_shared<Match2GreedyAgent>();
    if (name == "llm" || name.rfind("llm:", 0) == 0) {
        if (!backend) throw GameError(ErrorCode::InvalidConfig, "agent 'llm' needs --backend-config");
        return std::make_shared<LlmAgent>(std::move(backend), name == "llm" ? "llm" : name.substr(4));
    }
    throw GameError(ErrorCode::InvalidConfig, "unknown agent '" + name + "' (bfs, frontier, greedy, llm)");
}

}  // namespace arena::harness
