#include "arena/maze.hpp"

#include <algorithm>
#include <sstream>

namespace arena::maze {

using nlohmann::json;

char glyph(Cell cell) {
    switch (cell) {
        case Cell::Empty: return '.';
        case Cell::Wall: return '#';
        case Cell::Coin: return 'C';
        case Cell::Goal: return 'G';
        case Cell::Pickaxe: return 'T';
        case Cell::Sword: return 'W';
        case Cell::Magnet: return 'N';
        case Cell::Key: return 'K';
    }
    return '.';
}

std::string_view to_string(Cell cell) {
    switch (cell) {
        case Cell::Empty: return "Empty";
        case Cell::Wall: return "Wall";
        case Cell::Coin: return "Coin";
        case Cell::Goal: return "Goal";
        case Cell::Pickaxe: return "Pickaxe";
        case Cell::Sword: return "Sword";
        case Cell::Magnet: return "Magnet";
        case Cell::Key: return "Key";
    }
    return "Empty";
}

bool is_item(Cell cell) {
    return cell == Cell::Pickaxe || cell == Cell::Sword || cell == Cell::Magnet || cell == Cell::Key;
}

namespace {

Cell cell_from_glyph(char c) {
    switch (c) {
        case '.': return Cell::Empty;
        case '#': return Cell::Wall;
        case 'C': return Cell::Coin;
        case 'G': return Cell::Goal;
        case 'T': return Cell::Pickaxe;
        case 'W': return Cell::Sword;
        case 'N': return Cell::Magnet;
        case 'K': return Cell::Key;
        default: break;
    }
    throw GameError(ErrorCode::InvalidConfig, std::string("unknown map glyph '") + c + "'");
}

Cell& at(Grid& grid, Pos p) { return grid[p.row][p.col]; }
Cell at(const Grid& grid, Pos p) { return grid[p.row][p.col]; }

int count_cells(const Grid& grid, Cell kind) {
    int n = 0;
    for (const auto& row : grid)
        n += static_cast<int>(std::count(row.begin(), row.end(), kind));
    return n;
}

json pos_json(Pos p) { return json::array({p.row, p.col}); }
Pos pos_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

// Reveals the 3x3 neighbourhood of p; returns the number of newly explored cells.
int reveal(MazeState& s, Pos p) {
    int fresh = 0;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            const Pos q{p.row + dr, p.col + dc};
            if (!in_bounds(q)) continue;
            if (!s.explored[q.row][q.col]) {
                s.explored[q.row][q.col] = true;
                ++fresh;
            }
        }
    }
    return fresh;
}

int magnet_pull(MazeState& s) {
    int pulled = 0;
    for (int dr = -2; dr <= 2; ++dr) {
        for (int dc = -2; dc <= 2; ++dc) {
            const Pos q{s.agent.row + dr, s.agent.col + dc};
            if (!in_bounds(q) || at(s.grid, q) != Cell::Coin) continue;
            at(s.grid, q) = Cell::Empty;
            ++pulled;
        }
    }
    s.coins_collected += pulled;
    s.coins_by_magnet += pulled;
    return pulled;
}

void after_enter(MazeState& s, std::vector<MazeEvent>& events) {
    if (const int fresh = reveal(s, s.agent); fresh > 0)
        events.push_back({EventKind::Explored, fresh});
    if (s.has_magnet) {
        if (const int pulled = magnet_pull(s); pulled > 0)
            events.push_back({EventKind::MagnetPull, pulled});
    }
}

void lose_life(MazeState& s, std::vector<MazeEvent>& events, EventKind kind) {
    s.lives = std::max(0, s.lives - 1);
    events.push_back({kind});
}

bool monster_can_enter(const MazeState& s, Pos q, std::size_t self) {
    if (!in_bounds(q)) return false;
    const Cell c = at(s.grid, q);
    if (c == Cell::Wall || c == Cell::Goal || is_item(c)) return false;
    for (std::size_t i = 0; i < s.monsters.size(); ++i)
        if (i != self && s.monsters[i] == q) return false;
    return true;
}

void move_monsters(MazeState& s, std::vector<MazeEvent>& events) {
    static constexpr std::array<Direction, 4> kOrder = {Direction::Up, Direction::Down, Direction::Left,
                                                        Direction::Right};
    for (std::size_t i = 0; i < s.monsters.size();) {
        std::array<Pos, 4> options{};
        int n = 0;
        for (Direction d : kOrder) {
            const Pos q = step_toward(s.monsters[i], d);
            if (monster_can_enter(s, q, i)) options[n++] = q;
        }
        if (n == 0) {
            ++i;
            continue;
        }
        const Pos target = options[s.rng.below(n)];
        if (target == s.agent) {
            if (s.has_sword) {
                s.monsters.erase(s.monsters.begin() + static_cast<std::ptrdiff_t>(i));
                ++s.kills;
                events.push_back({EventKind::MonsterKilled});
                continue;
            }
            s.monsters[i] = target;
            lose_life(s, events, EventKind::MonsterHit);
            s.agent = s.start;
            after_enter(s, events);
            if (s.lives == 0) return;
            ++i;
            continue;
        }
        s.monsters[i] = target;
        ++i;
    }
}

void finish_step(MazeState& s, MazeStepResult& r, bool reached_goal) {
    ++s.steps_used;
    if (s.lives == 0)
        s.status = Status::DeadLivesZero;
    else if (reached_goal)
        s.status = Status::Success;
    else if (s.steps_used >= s.max_steps)
        s.status = Status::DeadStepsExhausted;
    r.reward_delta = kPointsStep;
    for (const auto& e : r.events) r.reward_delta += points(e);
    s.score += r.reward_delta;
    r.terminal = s.status;
}

void require_running(const MazeState& s) {
    if (s.terminal()) throw GameError(ErrorCode::TerminalEpisode, "maze episode already terminal");
}

}  // namespace

Pos MazeConfig::goal() const {
    for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c)
            if (grid[r][c] == Cell::Goal) return {r, c};
    return {-1, -1};
}

Grid grid_from_rows(const std::vector<std::string>& rows) {
    if (rows.size() != static_cast<std::size_t>(kSize))
        throw GameError(ErrorCode::InvalidConfig, "maze map must have 9 rows");
    Grid grid{};
    for (int r = 0; r < kSize; ++r) {
        std::string compact;
        for (char ch : rows[r])
            if (ch != ' ') compact.push_back(ch);
        if (compact.size() != static_cast<std::size_t>(kSize))
            throw GameError(ErrorCode::InvalidConfig, "maze map rows must have 9 cells");
        for (int c = 0; c < kSize; ++c) grid[r][c] = cell_from_glyph(compact[c]);
    }
    return grid;
}

std::vector<std::string> grid_to_rows(const Grid& grid) {
    std::vector<std::string> rows;
    for (const auto& row : grid) {
        std::string line;
        for (Cell c : row) line.push_back(glyph(c));
        rows.push_back(std::move(line));
    }
    return rows;
}

json to_json(const MazeConfig& config) {
    json monsters = json::array();
    for (Pos p : config.monster_spawns) monsters.push_back(pos_json(p));
    return json{{"level", to_string(config.level)},
                {"grid", grid_to_rows(config.grid)},
                {"start", pos_json(config.start)},
                {"monster_spawns", monsters},
                {"initial_lives", config.initial_lives},
                {"max_steps", config.max_steps},
                {"seed", config.seed}};
}

MazeConfig maze_config_from_json(const json& j) {
    MazeConfig c;
    c.level = parse_level(j.at("level").get<std::string>());
    c.grid = grid_from_rows(j.at("grid").get<std::vector<std::string>>());
    c.start = pos_from(j.at("start"));
    for (const auto& p : j.at("monster_spawns")) c.monster_spawns.push_back(pos_from(p));
    c.initial_lives = j.value("initial_lives", kDefaultLives);
    c.max_steps = j.value("max_steps", kDefaultMaxSteps);
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
}

std::string_view to_string(Status status) {
    switch (status) {
        case Status::Running: return "running";
        case Status::Success: return "success";
        case Status::DeadLivesZero: return "dead_lives_zero";
        case Status::DeadStepsExhausted: return "dead_steps_exhausted";
    }
    return "running";
}

Status parse_status(std::string_view text) {
    if (text == "success") return Status::Success;
    if (text == "dead_lives_zero") return Status::DeadLivesZero;
    if (text == "dead_steps_exhausted") return Status::DeadStepsExhausted;
    return Status::Running;
}

int MazeState::explored_count() const {
    int n = 0;
    for (const auto& row : explored) n += static_cast<int>(std::count(row.begin(), row.end(), true));
    return n;
}

json to_json(const MazeState& s) {
    std::vector<std::string> mask;
    for (const auto& row : s.explored) {
        std::string line;
        for (bool b : row) line.push_back(b ? '1' : '0');
        mask.push_back(std::move(line));
    }
    json monsters = json::array();
    for (Pos p : s.monsters) monsters.push_back(pos_json(p));
    return json{{"grid", grid_to_rows(s.grid)},
                {"agent", pos_json(s.agent)},
                {"start", pos_json(s.start)},
                {"lives", s.lives},
                {"score", s.score},
                {"steps_used", s.steps_used},
                {"explored", mask},
                {"monsters", monsters},
                {"coins_collected", s.coins_collected},
                {"kills", s.kills},
                {"barriers_destroyed", s.barriers_destroyed},
                {"pickaxe_uses", s.pickaxe_uses},
                {"has_sword", s.has_sword},
                {"has_magnet", s.has_magnet},
                {"has_key", s.has_key},
                {"status", to_string(s.status)},
                {"rng", s.rng.serialize()}};
}

std::string digest(const MazeState& state) { return fnv1a_hex(to_json(state).dump()); }

MazeAction MazeAction::from_id(int id) {
    if (id < 0 || id > 11)
        throw GameError(ErrorCode::MalformedAction, "maze action id must be in 0..11, got " + std::to_string(id));
    return {static_cast<Direction>(id / 3), id % 3 + 1};
}

Pos step_toward(Pos p, Direction d) {
    switch (d) {
        case Direction::Up: return {p.row - 1, p.col};
        case Direction::Down: return {p.row + 1, p.col};
        case Direction::Left: return {p.row, p.col - 1};
        case Direction::Right: return {p.row, p.col + 1};
    }
    return p;
}

std::string to_string(const MazeEvent& e) {
    switch (e.kind) {
        case EventKind::Explored: return "Explored(" + std::to_string(e.count) + ")";
        case EventKind::CoinCollected: return "CoinCollected";
        case EventKind::WallHit: return "WallHit";
        case EventKind::MonsterHit: return "MonsterHit";
        case EventKind::MonsterKilled: return "MonsterKilled";
        case EventKind::BarrierBroken: return "BarrierBroken";
        case EventKind::ItemPicked: return "ItemPicked(" + std::string(to_string(e.item)) + ")";
        case EventKind::GoalReached: return "GoalReached";
        case EventKind::GoalBlockedNoKey: return "GoalBlockedNoKey";
        case EventKind::InvalidAction: return "InvalidAction";
        case EventKind::MagnetPull: return "MagnetPull(" + std::to_string(e.count) + ")";
    }
    return "?";
}

int points(const MazeEvent& e) {
    switch (e.kind) {
        case EventKind::Explored: return kPointsExplore * e.count;
        case EventKind::CoinCollected: return kPointsCoin;
        case EventKind::MagnetPull: return kPointsCoin * e.count;
        case EventKind::WallHit:
        case EventKind::MonsterHit: return kPointsLifeLost;
        case EventKind::GoalReached: return kPointsGoal;
        default: return 0;
    }
}

MazeState init(const MazeConfig& config, std::uint64_t seed) {
    const auto fail = [](const std::string& why) { throw GameError(ErrorCode::InvalidConfig, why); };
    const Grid& g = config.grid;
    if (count_cells(g, Cell::Goal) != 1) fail("map must contain exactly one goal");
    if (count_cells(g, Cell::Coin) != kCoins) fail("map must contain exactly five coins");
    for (Cell item : {Cell::Pickaxe, Cell::Sword, Cell::Magnet, Cell::Key}) {
        const int expected = config.level == Level::Hard ? 1 : 0;
        if (count_cells(g, item) != expected)
            fail("level " + std::string(arena::to_string(config.level)) + " expects " + std::to_string(expected) +
                 " " + std::string(to_string(item)));
    }
    if (!in_bounds(config.start) || at(g, config.start) != Cell::Empty) fail("start must be an empty cell");
    const std::size_t monsters = config.level == Level::Easy ? 0 : 2;
    if (config.monster_spawns.size() != monsters) fail("wrong monster count for level");
    for (std::size_t i = 0; i < config.monster_spawns.size(); ++i) {
        const Pos m = config.monster_spawns[i];
        if (!in_bounds(m) || at(g, m) != Cell::Empty || m == config.start) fail("monster spawn must be an empty cell");
        for (std::size_t j = 0; j < i; ++j)
            if (config.monster_spawns[j] == m) fail("monster spawns must be distinct");
    }
    if (config.initial_lives < 1 || config.max_steps < 1) fail("lives and max_steps must be positive");

    MazeState s;
    s.grid = g;
    s.agent = config.start;
    s.start = config.start;
    s.lives = config.initial_lives;
    s.initial_lives = config.initial_lives;
    s.max_steps = config.max_steps;
    s.monsters = config.monster_spawns;
    s.initial_monsters = static_cast<int>(monsters);
    s.level = config.level;
    s.rng = Rng(mix_seed(seed, 0x6d617a65));
    reveal(s, s.agent);
    return s;
}

std::vector<std::string> render_rows(const MazeState& s, bool full_vision) {
    std::vector<std::string> rows;
    for (int r = 0; r < kSize; ++r) {
        std::string line;
        for (int c = 0; c < kSize; ++c) {
            const Pos p{r, c};
            const Cell cell = at(s.grid, p);
            char ch = '?';
            if (p == s.agent) {
                ch = 'A';
            } else if (cell == Cell::Goal) {
                ch = 'G';
            } else if (full_vision || s.explored[r][c]) {
                const bool monster = std::find(s.monsters.begin(), s.monsters.end(), p) != s.monsters.end();
                ch = monster ? 'M' : glyph(cell);
            }
            line.push_back(ch);
        }
        rows.push_back(std::move(line));
    }
    return rows;
}

std::string observe(const MazeState& s, bool full_vision) {
    std::ostringstream out;
    out << "  ";
    for (int c = 0; c < kSize; ++c) out << ' ' << c;
    out << "\n  " << std::string(2 * kSize + 3, '-') << '\n';
    const auto rows = render_rows(s, full_vision);
    for (int r = 0; r < kSize; ++r) {
        out << ' ' << r << " |";
        for (char ch : rows[r]) out << ' ' << ch;
        out << '\n';
    }
    out << "\nCurrent position (row,col): (" << s.agent.row << ',' << s.agent.col << ")\n";
    if (full_vision) out << '\n' << kFullVisionNote << '\n';
    return out.str();
}

MazeTransition apply_action(const MazeState& state, MazeAction action) {
    require_running(state);
    if (action.magnitude < 1 || action.magnitude > 3)
        throw GameError(ErrorCode::MalformedAction, "maze move magnitude must be 1..3");

    MazeTransition t{state, {}};
    MazeState& s = t.state;
    auto& events = t.result.events;
    bool reached_goal = false;

    for (int sub = 0; sub < action.magnitude; ++sub) {
        const Pos next = step_toward(s.agent, action.direction);
        if (!in_bounds(next)) {
            events.push_back({EventKind::InvalidAction});
            break;
        }
        Cell& cell = at(s.grid, next);
        if (cell == Cell::Wall) {
            if (s.pickaxe_uses == 0) {
                lose_life(s, events, EventKind::WallHit);
                break;
            }
            --s.pickaxe_uses;
            cell = Cell::Empty;
            ++s.barriers_destroyed;
            events.push_back({EventKind::BarrierBroken});
        }
        if (auto it = std::find(s.monsters.begin(), s.monsters.end(), next); it != s.monsters.end()) {
            if (!s.has_sword) {
                lose_life(s, events, EventKind::MonsterHit);
                s.agent = s.start;
                after_enter(s, events);
                break;
            }
            s.monsters.erase(it);
            ++s.kills;
            events.push_back({EventKind::MonsterKilled});
        }
        if (cell == Cell::Goal) {
            if (s.level == Level::Hard && !s.has_key) {
                events.push_back({EventKind::GoalBlockedNoKey});
                break;
            }
            s.agent = next;
            after_enter(s, events);
            events.push_back({EventKind::GoalReached});
            reached_goal = true;
            break;
        }
        s.agent = next;
        if (cell == Cell::Coin) {
            cell = Cell::Empty;
            ++s.coins_collected;
            events.push_back({EventKind::CoinCollected});
        } else if (is_item(cell)) {
            switch (cell) {
                case Cell::Pickaxe: s.pickaxe_uses = kPickaxeCharges; break;
                case Cell::Sword: s.has_sword = true; break;
                case Cell::Magnet: s.has_magnet = true; break;
                case Cell::Key: s.has_key = true; break;
                default: break;
            }
            events.push_back({EventKind::ItemPicked, 0, cell});
            cell = Cell::Empty;
        }
        after_enter(s, events);
    }

    if (!reached_goal && s.lives > 0) move_monsters(s, events);
    finish_step(s, t.result, reached_goal);
    return t;
}

MazeTransition apply_action_id(const MazeState& state, int action_id) {
    require_running(state);
    return apply_action(state, MazeAction::from_id(action_id));
}

MazeTransition apply_invalid(const MazeState& state) {
    require_running(state);
    MazeTransition t{state, {}};
    t.result.events.push_back({EventKind::InvalidAction});
    move_monsters(t.state, t.result.events);
    finish_step(t.state, t.result, false);
    return t;
}

MazeState force_exhaust(const MazeState& state) {
    MazeState s = state;
    if (s.status == Status::Running) s.status = Status::DeadStepsExhausted;
    return s;
}

json to_json(const MazeMetrics& m) {
    return json{{"success", m.success}, {"score", m.score},   {"steps", m.steps}, {"explor", m.explor},
                {"gold", m.gold},       {"rem_hp", m.rem_hp}, {"kills", m.kills}, {"barr", m.barr}};
}

MazeMetrics maze_metrics_from_json(const json& j) {
    MazeMetrics m;
    m.success = j.at("success").get<bool>();
    m.score = j.at("score").get<int>();
    m.steps = j.at("steps").get<int>();
    m.explor = j.at("explor").get<double>();
    m.gold = j.at("gold").get<double>();
    m.rem_hp = j.at("rem_hp").get<int>();
    m.kills = j.at("kills").get<int>();
    m.barr = j.at("barr").get<int>();
    return m;
}

MazeMetrics metrics_snapshot(const MazeState& s, ExplorBasis basis) {
    if (!s.terminal()) throw GameError(ErrorCode::NotTerminal, "maze episode still running");
    MazeMetrics m;
    m.success = s.status == Status::Success;
    m.score = s.score;
    m.steps = s.steps_used;
    if (basis == ExplorBasis::AllCells) {
        m.explor = 100.0 * s.explored_count() / (kSize * kSize);
    } else {
        int seen = 0;
        int open = 0;
        for (int r = 0; r < kSize; ++r)
            for (int c = 0; c < kSize; ++c) {
                if (s.grid[r][c] == Cell::Wall) continue;
                ++open;
                seen += s.explored[r][c] ? 1 : 0;
            }
        m.explor = open == 0 ? 0.0 : 100.0 * seen / open;
    }
    m.gold = 100.0 * s.coins_collected / kCoins;
    m.rem_hp = s.lives;
    m.kills = s.kills;
    m.barr = s.barriers_destroyed;
    return m;
}

}  // namespace arena::maze
