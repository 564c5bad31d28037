#pragma once

#include <string>
#include <vector>

#include "arena/level_gen.hpp"
#include "arena/match2.hpp"
#include "arena/maze.hpp"

namespace fixture {

using arena::Pos;

inline arena::maze::MazeConfig maze(const std::vector<std::string>& rows, Pos start,
                                  arena::Level level = arena::Level::Easy, std::vector<Pos> monsters = {},
                                  int lives = arena::maze::kDefaultLives, int max_steps = arena::maze::kDefaultMaxSteps) {
    arena::maze::MazeConfig c;
    c.level = level;
    c.grid = arena::maze::grid_from_rows(rows);
    c.start = start;
    c.monster_spawns = std::move(monsters);
    c.initial_lives = lives;
    c.max_steps = max_steps;
    c.seed = 7;
    return c;
}

/// Open Easy map, start bottom-left, goal top-left, a coin at (6,1).
/// Path 9, 0, 6, 0 reaches (6,0) with only (5,2) still hidden around the coin.
inline arena::maze::MazeConfig coin_approach() {
    return maze({"G.......C",
                 ".........",
                 "........C",
                 ".........",
                 "........C",
                 ".........",
                 ".C......C",
                 ".........",
                 "........."},
                {8, 0});
}

/// Start (4,0) with a wall two cells to the right.
inline arena::maze::MazeConfig wall_ahead() {
    return maze({"G.......C",
                 "........C",
                 "........C",
                 "........C",
                 "..#.....C",
                 ".........",
                 ".........",
                 ".........",
                 "........."},
                {4, 0});
}

/// Worked-example board: 8 rows of 8 letters.
inline const std::vector<std::string>& worked_board_rows() {
    static const std::vector<std::string> rows = {
        "CDDABBCB", "CCCBAABC", "ABBCBDBD", "CCBABBAB", "BDCBADAB", "ABBDACAA", "DBACCDBD", "DBAAACBD",
    };
    return rows;
}

inline arena::match2::MatchState worked_state() {
    arena::match2::MatchState s;
    s.board = arena::match2::board_from_rows(worked_board_rows());
    s.score = 0;
    s.steps_remaining = 15;
    s.max_steps = 15;
    s.inventory = {0, 1, 2, 1};
    s.targets = {10, 6, 8, 6};
    s.rng = arena::Rng(99);
    return s;
}

}  // namespace fixture

#include "arena/episode.hpp"

namespace fixture {

/// A finished log carrying only what aggregation reads.
inline arena::harness::EpisodeLog finished_log(arena::Game game, const std::string& agent, arena::Level level,
                                             std::uint64_t seed, const nlohmann::json& metrics) {
    arena::harness::EpisodeLog log;
    log.header.game = game;
    log.header.agent_id = agent;
    log.header.level = level;
    log.header.seed = seed;
    log.terminal.status = metrics.at("success").get<bool>() ? "success" : "failure";
    log.terminal.metrics = metrics;
    return log;
}

/// Maze episode ending with the given score and explored-cell count.
inline arena::harness::EpisodeLog maze_log(const std::string& agent, arena::Level level, std::uint64_t seed, bool success,
                                         int score, int steps, int explored, int coins, int lives) {
    using namespace arena::maze;
    MazeState s = init(wall_ahead(), seed);
    s.status = success ? Status::Success : Status::DeadStepsExhausted;
    s.score = score;
    s.steps_used = steps;
    for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c) s.explored[r][c] = r * kSize + c < explored;
    s.coins_collected = coins;
    s.lives = lives;
    return finished_log(arena::Game::Maze, agent, level, seed, to_json(metrics_snapshot(s)));
}

inline arena::harness::EpisodeLog match2_log(const std::string& agent, arena::Level level, std::uint64_t seed,
                                           bool success, int score, int max_steps, int remaining, int cleared,
                                           int calls, int valid) {
    using namespace arena::match2;
    MatchState s;
    s.status = success ? Status::Success : Status::Failure;
    s.score = score;
    s.max_steps = max_steps;
    s.steps_remaining = remaining;
    s.eliminated = {cleared, 0, 0, 0};
    s.api_calls = calls;
    s.valid_calls = valid;
    return finished_log(arena::Game::Match2, agent, level, seed, to_json(metrics_snapshot(s)));
}

/// Three maze and three match-2 episodes with hand-worked means:
///   maze:    scores 100/200/300, one success, 62/81, 81/81 and 40/81 cells seen
///   match-2: R/M.S 4/15, 3/15, 0/10; clears 54/11, 30/12, 20/10; calls 7/10, 12/12, 5/10
inline std::vector<arena::harness::EpisodeLog> maze_trio() {
    return {maze_log("m", arena::Level::Easy, 1, true, 100, 20, 62, 5, 3),
            maze_log("m", arena::Level::Easy, 2, false, 200, 100, 81, 3, 2),
            maze_log("m", arena::Level::Easy, 3, false, 300, 100, 40, 1, 0)};
}

inline std::vector<arena::harness::EpisodeLog> match2_trio() {
    return {match2_log("m", arena::Level::Medium, 1, true, 220, 15, 4, 54, 10, 7),
            match2_log("m", arena::Level::Medium, 2, false, 100, 15, 3, 30, 12, 12),
            match2_log("m", arena::Level::Medium, 3, false, 40, 10, 0, 20, 10, 5)};
}

}  // namespace fixture
