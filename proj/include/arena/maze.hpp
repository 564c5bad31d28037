#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/common.hpp"

namespace arena::maze {

inline constexpr int kSize = 9;
inline constexpr int kCoins = 5;
inline constexpr int kDefaultLives = 3;
inline constexpr int kDefaultMaxSteps = 100;
inline constexpr int kPickaxeCharges = 3;

// Point values of the scoring table shown to the agent.
inline constexpr int kPointsExplore = 10;
inline constexpr int kPointsCoin = 500;
inline constexpr int kPointsStep = -50;
inline constexpr int kPointsLifeLost = -1000;
inline constexpr int kPointsGoal = 2000;

enum class Cell : std::uint8_t { Empty, Wall, Coin, Goal, Pickaxe, Sword, Magnet, Key };

char glyph(Cell cell);
std::string_view to_string(Cell cell);
bool is_item(Cell cell);

using Grid = std::array<std::array<Cell, kSize>, kSize>;
using Mask = std::array<std::array<bool, kSize>, kSize>;

inline bool in_bounds(Pos p) { return p.row >= 0 && p.row < kSize && p.col >= 0 && p.col < kSize; }

struct MazeConfig {
    Level level = Level::Easy;
    Grid grid{};
    Pos start{};
    std::vector<Pos> monster_spawns;
    int initial_lives = kDefaultLives;
    int max_steps = kDefaultMaxSteps;
    std::uint64_t seed = 0;

    Pos goal() const;
};

nlohmann::json to_json(const MazeConfig& config);
MazeConfig maze_config_from_json(const nlohmann::json& j);

/// Parses 9 strings of 9 glyphs ('.', '#', 'C', 'G', 'T', 'W', 'N', 'K').
Grid grid_from_rows(const std::vector<std::string>& rows);
std::vector<std::string> grid_to_rows(const Grid& grid);

enum class Status { Running, Success, DeadLivesZero, DeadStepsExhausted };
std::string_view to_string(Status status);
Status parse_status(std::string_view text);

struct MazeState {
    Grid grid{};
    Pos agent{};
    Pos start{};
    int lives = kDefaultLives;
    int initial_lives = kDefaultLives;
    int score = 0;
    int steps_used = 0;
    int max_steps = kDefaultMaxSteps;
    Mask explored{};
    std::vector<Pos> monsters;
    int initial_monsters = 0;
    int coins_collected = 0;
    int coins_by_magnet = 0;  // subset of coins_collected
    int kills = 0;
    int barriers_destroyed = 0;
    int pickaxe_uses = 0;
    bool has_sword = false;
    bool has_magnet = false;
    bool has_key = false;
    Level level = Level::Easy;
    Status status = Status::Running;
    Rng rng;

    int explored_count() const;
    bool terminal() const { return status != Status::Running; }
};

/// Canonical serialization (includes the generator state) used for digests.
nlohmann::json to_json(const MazeState& state);
std::string digest(const MazeState& state);

enum class Direction { Up, Down, Left, Right };

/// Action id = direction * 3 + (magnitude - 1), directions ordered Up, Down, Left, Right.
struct MazeAction {
    Direction direction = Direction::Up;
    int magnitude = 1;

    static MazeAction from_id(int id);  // throws GameError(MalformedAction)
    int id() const { return static_cast<int>(direction) * 3 + (magnitude - 1); }
    bool operator==(const MazeAction&) const = default;
};

Pos step_toward(Pos p, Direction d);

enum class EventKind {
    Explored,
    CoinCollected,
    WallHit,
    MonsterHit,
    MonsterKilled,
    BarrierBroken,
    ItemPicked,
    GoalReached,
    GoalBlockedNoKey,
    InvalidAction,
    MagnetPull,
};

struct MazeEvent {
    EventKind kind;
    int count = 0;           // Explored(n), MagnetPull(n)
    Cell item = Cell::Empty;  // ItemPicked(kind)

    bool operator==(const MazeEvent&) const = default;
};

std::string to_string(const MazeEvent& event);
int points(const MazeEvent& event);

struct MazeStepResult {
    int reward_delta = 0;
    std::vector<MazeEvent> events;
    Status terminal = Status::Running;
};

struct MazeTransition {
    MazeState state;
    MazeStepResult result;
};

/// Validates the map and places the agent; throws GameError(InvalidConfig).
MazeState init(const MazeConfig& config, std::uint64_t seed);

inline constexpr std::string_view kFullVisionNote =
    "NOTE: You have full vision of the entire map. You can see all obstacles, coins, monsters, "
    "and items without the need to explore.";

/// Text map in the agent-facing layout: column header, dashed rule, "row | cells"
/// lines, then the current-position line (and the full-vision note when enabled).
std::string observe(const MazeState& state, bool full_vision);

/// The 9 rendered glyph rows only (no header); '?' marks fog.
std::vector<std::string> render_rows(const MazeState& state, bool full_vision);

MazeTransition apply_action(const MazeState& state, MazeAction action);
MazeTransition apply_action_id(const MazeState& state, int action_id);

/// A response that did not parse into an action: costs a step, no movement.
MazeTransition apply_invalid(const MazeState& state);

/// Ends a running episode as step-exhausted (idle-timeout finalization).
MazeState force_exhaust(const MazeState& state);

enum class ExplorBasis { AllCells, NonWallCells };

struct MazeMetrics {
    bool success = false;
    int score = 0;
    int steps = 0;
    double explor = 0.0;
    double gold = 0.0;
    int rem_hp = 0;
    int kills = 0;
    int barr = 0;
};

nlohmann::json to_json(const MazeMetrics& m);
MazeMetrics maze_metrics_from_json(const nlohmann::json& j);

/// throws GameError(NotTerminal) while the episode is running.
MazeMetrics metrics_snapshot(const MazeState& state, ExplorBasis basis = ExplorBasis::AllCells);

}  // namespace arena::maze
