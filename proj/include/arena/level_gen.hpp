#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/common.hpp"
#include "arena/maze.hpp"
#include "arena/match2.hpp"

namespace arena::level_gen {

struct Range {
    int lo = 0;
    int hi = 0;
    bool contains(int v) const { return v >= lo && v <= hi; }
};

/// Step budget per difficulty (match-2).
Range match2_step_range(Level level);
/// Elimination target per colour per difficulty (match-2).
Range match2_target_range(Level level);

inline constexpr double kWallDensityMin = 0.18;
inline constexpr double kWallDensityMax = 0.25;
inline constexpr int kMaxGenerationAttempts = 500;

/// Walls are drawn over the 81 cells at a density resampled per attempt.
maze::MazeConfig gen_maze(Level level, std::uint64_t seed);

/// Breadth-first reachability over non-wall cells. The goal is a sink: paths
/// may end on it but never pass through it. Requires the goal and all five
/// coins to be reachable from the start and, on Hard, the key as well.
bool verify_solvable(const maze::MazeConfig& config);

struct Match2Config {
    Level level = Level::Easy;
    int max_steps = 0;
    std::array<int, match2::kColors> targets{};
    match2::Inventory inventory{1, 1, 1, 1};
    match2::Board board{};
    std::uint64_t seed = 0;
};

struct Match2GenOptions {
    bool randomize_inventory = false;  // each prop uniform in [0, 2]
};

Match2Config gen_match2(Level level, std::uint64_t seed, Match2GenOptions options = {});

nlohmann::json to_json(const Match2Config& config);
Match2Config match2_config_from_json(const nlohmann::json& j);

match2::MatchState init_match2(const Match2Config& config, bool no_props = false);

/// One persisted instance: {"game", "level", "seed", "config"}.
struct Instance {
    Game game = Game::Maze;
    Level level = Level::Easy;
    std::uint64_t seed = 0;
    nlohmann::json config;

    maze::MazeConfig maze() const { return maze::maze_config_from_json(config); }
    Match2Config match2() const { return match2_config_from_json(config); }
};

Instance make_instance(Game game, Level level, std::uint64_t seed);
nlohmann::json to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

struct ManifestEntry {
    std::string path;  // relative to the manifest's directory
    Level level = Level::Easy;
    std::uint64_t seed = 0;
};

struct Manifest {
    Game game = Game::Maze;
    std::vector<ManifestEntry> entries;
};

/// Writes count instances per level (seeds base_seed, base_seed + 1, ...)
/// plus manifest.json into dir; returns the manifest path.
std::filesystem::path write_suite(const std::filesystem::path& dir, Game game, const std::vector<Level>& levels,
                                  int count, std::uint64_t base_seed);

Manifest load_manifest(const std::filesystem::path& manifest_path);
std::vector<Instance> load_suite(const std::filesystem::path& manifest_path);

}  // namespace arena::level_gen
