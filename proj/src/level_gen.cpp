#include "arena/level_gen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>

namespace arena::level_gen {

using nlohmann::json;
using maze::Cell;
using maze::MazeConfig;

namespace {

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
}

int manhattan(Pos a, Pos b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }
int chebyshev(Pos a, Pos b) { return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)); }

// One generation attempt; returns false when placement constraints cannot be met.
bool try_layout(Level level, Rng& rng, MazeConfig& out) {
    constexpr int n = maze::kSize;
    const double density = kWallDensityMin + (kWallDensityMax - kWallDensityMin) * rng.unit();
    const int walls = static_cast<int>(std::lround(density * n * n));

    static constexpr std::array<Pos, 4> kCorners = {Pos{8, 0}, Pos{8, 8}, Pos{0, 0}, Pos{0, 8}};
    MazeConfig c;
    c.level = level;
    for (auto& row : c.grid) row.fill(Cell::Empty);
    c.start = kCorners[rng.below(4)];

    std::vector<Pos> cells;
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
            if (Pos p{r, col}; p != c.start) cells.push_back(p);
    shuffle(cells, rng);

    auto goal_it = std::find_if(cells.begin(), cells.end(), [&](Pos p) { return manhattan(p, c.start) >= 8; });
    if (goal_it == cells.end()) return false;
    c.grid[goal_it->row][goal_it->col] = Cell::Goal;
    cells.erase(goal_it);

    std::size_t next = 0;
    auto take = [&](Cell kind, int count) {
        for (int i = 0; i < count && next < cells.size(); ++i, ++next) c.grid[cells[next].row][cells[next].col] = kind;
    };
    take(Cell::Wall, walls);
    take(Cell::Coin, maze::kCoins);
    if (level == Level::Hard)
        for (Cell item : {Cell::Pickaxe, Cell::Sword, Cell::Magnet, Cell::Key}) take(item, 1);

    if (level != Level::Easy) {
        for (; next < cells.size() && c.monster_spawns.size() < 2; ++next)
            if (chebyshev(cells[next], c.start) >= 3) c.monster_spawns.push_back(cells[next]);
        if (c.monster_spawns.size() < 2) return false;
    }
    out = std::move(c);
    return true;
}

}  // namespace

Range match2_step_range(Level level) {
    switch (level) {
        case Level::Easy: return {15, 18};
        case Level::Medium: return {12, 15};
        case Level::Hard: return {10, 13};
    }
    return {15, 18};
}

Range match2_target_range(Level level) {
    switch (level) {
        case Level::Easy: return {8, 12};
        case Level::Medium: return {12, 16};
        case Level::Hard: return {16, 20};
    }
    return {8, 12};
}

bool verify_solvable(const MazeConfig& config) {
    constexpr int n = maze::kSize;
    const auto& g = config.grid;
    if (!maze::in_bounds(config.start) || g[config.start.row][config.start.col] == Cell::Wall) return false;

    maze::Mask seen{};
    std::deque<Pos> frontier{config.start};
    seen[config.start.row][config.start.col] = true;
    while (!frontier.empty()) {
        const Pos p = frontier.front();
        frontier.pop_front();
        if (g[p.row][p.col] == Cell::Goal) continue;  // entering the goal ends the episode
        for (auto d : {maze::Direction::Up, maze::Direction::Down, maze::Direction::Left, maze::Direction::Right}) {
            const Pos q = maze::step_toward(p, d);
            if (!maze::in_bounds(q) || seen[q.row][q.col] || g[q.row][q.col] == Cell::Wall) continue;
            seen[q.row][q.col] = true;
            frontier.push_back(q);
        }
    }

    bool goal = false;
    int coins = 0;
    bool key = false;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (!seen[r][c]) continue;
            goal = goal || g[r][c] == Cell::Goal;
            coins += g[r][c] == Cell::Coin ? 1 : 0;
            key = key || g[r][c] == Cell::Key;
        }
    if (!goal || coins != maze::kCoins) return false;
    return config.level != Level::Hard || key;
}

MazeConfig gen_maze(Level level, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x100 + level_index(level)));
    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        MazeConfig c;
        if (!try_layout(level, rng, c)) continue;
        c.seed = seed;
        if (verify_solvable(c)) return c;
    }
    throw GameError(ErrorCode::GenerationExhausted,
                   "no solvable maze after " + std::to_string(kMaxGenerationAttempts) + " attempts");
}

Match2Config gen_match2(Level level, std::uint64_t seed, Match2GenOptions options) {
    Rng rng(mix_seed(seed, 0x200 + level_index(level)));
    Match2Config c;
    c.level = level;
    c.seed = seed;
    const Range steps = match2_step_range(level);
    const Range target = match2_target_range(level);
    c.max_steps = rng.uniform_int(steps.lo, steps.hi);
    for (int& t : c.targets) t = rng.uniform_int(target.lo, target.hi);
    for (auto& row : c.board)
        for (auto& cell : row) cell = static_cast<match2::Color>(rng.below(match2::kColors));
    if (options.randomize_inventory)
        c.inventory = {rng.uniform_int(0, 2), rng.uniform_int(0, 2), rng.uniform_int(0, 2), rng.uniform_int(0, 2)};
    return c;
}

json to_json(const Match2Config& c) {
    return json{{"level", to_string(c.level)},
                {"max_steps", c.max_steps},
                {"targets", c.targets},
                {"inventory",
                 {{"row", c.inventory.row}, {"col", c.inventory.col}, {"bomb", c.inventory.bomb}, {"hammer", c.inventory.hammer}}},
                {"board", match2::board_to_rows(c.board)},
                {"seed", c.seed}};
}

Match2Config match2_config_from_json(const json& j) {
    Match2Config c;
    c.level = parse_level(j.at("level").get<std::string>());
    c.max_steps = j.at("max_steps").get<int>();
    c.targets = j.at("targets").get<std::array<int, match2::kColors>>();
    const auto& inv = j.at("inventory");
    c.inventory = {inv.at("row").get<int>(), inv.at("col").get<int>(), inv.at("bomb").get<int>(),
                   inv.at("hammer").get<int>()};
    c.board = match2::board_from_rows(j.at("board").get<std::vector<std::string>>());
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
}

match2::MatchState init_match2(const Match2Config& config, bool no_props) {
    if (config.max_steps < 1) throw GameError(ErrorCode::InvalidConfig, "max_steps must be positive");
    for (const auto& row : config.board)
        for (auto cell : row)
            if (cell == match2::Color::Empty) throw GameError(ErrorCode::InvalidConfig, "initial board must be full");
    match2::MatchState s;
    s.board = config.board;
    s.max_steps = config.max_steps;
    s.steps_remaining = config.max_steps;
    s.targets = config.targets;
    s.inventory = no_props ? match2::Inventory{} : config.inventory;
    s.rng = Rng(mix_seed(config.seed, 0x6d617463));
    return s;
}

Instance make_instance(Game game, Level level, std::uint64_t seed) {
    Instance inst{game, level, seed, {}};
    inst.config = game == Game::Maze ? maze::to_json(gen_maze(level, seed)) : to_json(gen_match2(level, seed));
    return inst;
}

json to_json(const Instance& i) {
    return json{{"game", to_string(i.game)}, {"level", to_string(i.level)}, {"seed", i.seed}, {"config", i.config}};
}

Instance instance_from_json(const json& j) {
    Instance i;
    i.game = parse_game(j.at("game").get<std::string>());
    i.level = parse_level(j.at("level").get<std::string>());
    i.seed = j.at("seed").get<std::uint64_t>();
    i.config = j.at("config");
    return i;
}

std::filesystem::path write_suite(const std::filesystem::path& dir, Game game, const std::vector<Level>& levels,
                                  int count, std::uint64_t base_seed) {
    std::filesystem::create_directories(dir);
    json entries = json::array();
    std::uint64_t seed = base_seed;
    for (Level level : levels) {
        for (int i = 0; i < count; ++i, ++seed) {
            const Instance inst = make_instance(game, level, seed);
            const std::string name =
                std::string(to_string(game)) + "_" + std::string(to_string(level)) + "_" + std::to_string(seed) + ".json";
            std::ofstream(dir / name) << to_json(inst).dump(2) << '\n';
            entries.push_back({{"path", name}, {"level", to_string(level)}, {"seed", seed}});
        }
    }
    const auto manifest = dir / "manifest.json";
    std::ofstream(manifest) << json{{"game", to_string(game)}, {"instances", entries}}.dump(2) << '\n';
    return manifest;
}

Manifest load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw GameError(ErrorCode::InvalidConfig, "cannot open manifest " + manifest_path.string());
    const json j = json::parse(in);
    Manifest m;
    m.game = parse_game(j.at("game").get<std::string>());
    for (const auto& e : j.at("instances"))
        m.entries.push_back({e.at("path").get<std::string>(), parse_level(e.at("level").get<std::string>()),
                             e.at("seed").get<std::uint64_t>()});
    return m;
}

std::vector<Instance> load_suite(const std::filesystem::path& manifest_path) {
    const Manifest m = load_manifest(manifest_path);
    std::vector<Instance> out;
    for (const auto& e : m.entries) {
        std::ifstream in(manifest_path.parent_path() / e.path);
        if (!in) throw GameError(ErrorCode::InvalidConfig, "cannot open instance " + e.path);
        out.push_back(instance_from_json(json::parse(in)));
    }
    return out;
}

}  // namespace arena::level_gen
