#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "arena/common.hpp"

namespace arena::match2 {

inline constexpr int kSize = 8;
inline constexpr int kColors = 4;

// Point costs deducted when a prop is used.
inline constexpr int kCostRow = 32;
inline constexpr int kCostCol = 32;
inline constexpr int kCostBomb = 12;
inline constexpr int kCostHammer = 4;

enum class Color : std::uint8_t { A, B, C, D, Empty };

char glyph(Color c);
std::optional<Color> color_from_glyph(char c);

using Board = std::array<std::array<Color, kSize>, kSize>;

/// 8 lines of 8 space-separated letters; '.' for Empty.
std::string board_to_text(const Board& board);
std::vector<std::string> board_to_rows(const Board& board);  // compact, no spaces
Board board_from_rows(const std::vector<std::string>& rows); // spaces ignored

/// One bit per cell, bit index row * 8 + col.
using Bits = std::uint64_t;

inline constexpr int bit_index(Pos p) { return p.row * kSize + p.col; }

struct Group {
    Color color = Color::Empty;
    std::vector<Pos> cells;  // row-major order
};

/// All maximal 4-connected same-colour components with at least two cells,
/// ordered by their first cell in row-major order.
std::vector<Group> find_groups(const Board& board);

/// The component containing p (size 1 for singletons, empty for Empty cells).
Bits component_at(const Board& board, Pos p);

/// Points for eliminating a group of n >= 2 tiles: 5n + 3 * max(0, n - 2).
int score_elimination(int n);

struct Inventory {
    int row = 0;
    int col = 0;
    int bomb = 0;
    int hammer = 0;
    bool operator==(const Inventory&) const = default;
};

enum class Status { Running, Success, Failure };
std::string_view to_string(Status status);
Status parse_status(std::string_view text);

struct MatchState {
    Board board{};
    int score = 0;
    int steps_remaining = 0;
    int max_steps = 0;
    Inventory inventory;
    std::array<int, kColors> targets{};
    std::array<int, kColors> eliminated{};
    int api_calls = 0;
    int valid_calls = 0;
    Status status = Status::Running;
    Rng rng;

    int steps_used() const { return max_steps - steps_remaining; }
    int total_eliminated() const;
    bool terminal() const { return status != Status::Running; }
};

nlohmann::json to_json(const MatchState& state);
std::string digest(const MatchState& state);

struct Eliminate { Pos pos; bool operator==(const Eliminate&) const = default; };
struct RowClear { int index = 0; bool operator==(const RowClear&) const = default; };
struct ColClear { int index = 0; bool operator==(const ColClear&) const = default; };
struct Bomb { Pos pos; bool operator==(const Bomb&) const = default; };
struct Hammer { Pos pos; bool operator==(const Hammer&) const = default; };

using MatchAction = std::variant<Eliminate, RowClear, ColClear, Bomb, Hammer>;

/// Inner action object: {"type": "eliminate", "pos": [i, j]} or {"type": "row", "index": k}.
nlohmann::json action_to_json(const MatchAction& action);
/// Full wire form {"action": {...}}; nullopt renders {"action": null}.
std::string format_action(const std::optional<MatchAction>& action);
bool is_prop(const MatchAction& action);

struct MatchStepResult {
    int score_delta = 0;
    std::array<int, kColors> cleared{};  // per colour, this action
    int cleared_total = 0;
    int refilled = 0;
    Status terminal = Status::Running;
};

struct MatchTransition {
    MatchState state;
    MatchStepResult result;
};

/// Compacts every column downward (order preserved), then fills the holes
/// column by column, top-down, with uniform draws over A..D.
Board gravity_and_refill(const Board& board, Rng& rng);

/// Throws GameError with InvalidTarget, OutOfProp, OutOfRange or TerminalEpisode;
/// a rejected action leaves the state untouched.
MatchTransition apply_action(const MatchState& state, const MatchAction& action);

/// Counts one model/agent call; valid marks a parsed, engine-accepted action.
void record_call(MatchState& state, bool valid);

/// The agent returned {"action": null}: remaining steps are forfeited.
MatchState forfeit(const MatchState& state);

/// Every action the engine would accept from this state.
std::vector<MatchAction> legal_actions(const MatchState& state);

struct MatchMetrics {
    bool success = false;
    int score = 0;
    int steps_used = 0;
    double rms = 0.0;             // R/M.S
    double score_per_step = 0.0;  // Score/Step
    double clear_per_step = 0.0;  // Clear/Step
    double api_eff = 0.0;         // API Eff.
};

nlohmann::json to_json(const MatchMetrics& m);
MatchMetrics match_metrics_from_json(const nlohmann::json& j);

/// throws GameError(NotTerminal) while the episode is running.
MatchMetrics metrics_snapshot(const MatchState& state);

}  // namespace arena::match2
