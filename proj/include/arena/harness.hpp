#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/agents.hpp"
#include "arena/episode.hpp"
#include "arena/level_gen.hpp"

namespace arena::harness {

/// Match-2 episodes are cut off after this many decisions per step of budget,
/// so an agent that only produces rejected actions still terminates.
inline constexpr int kMatch2DecisionFactor = 3;

/// Plays one instance to the end. A backend that stays unavailable after its
/// retries yields a log marked aborted instead of an exception.
EpisodeLog run_episode(const level_gen::Instance& instance, const Agent& agent, const PolicyContext& ctx);

struct ReplayResult {
    bool ok = false;
    int divergent_step = -1;  // -1 when the mismatch is in the header or terminal line
    std::string reason;
};

/// Re-runs the recorded actions through a fresh engine and compares every
/// reward, score and state digest plus the terminal snapshot.
ReplayResult replay_verify(const EpisodeLog& log);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ReportRow {
    std::string model;
    std::string level;  // "easy", "medium", "hard" or "all"
    int samples = 0;
    std::vector<double> values;  // aligned with metric_columns(game)

    double value(const std::string& column, Game game) const;
};

struct MetricsReport {
    Game game = Game::Maze;
    std::vector<ReportRow> rows;  // per model: level rows then the "all" row
    int aborted = 0;              // episodes left out of the means

    const ReportRow* find(const std::string& model, const std::string& level) const;
};

/// Table header including the model and sample columns.
const std::vector<std::string>& table_columns(Game game);
/// Just the metric columns.
std::vector<std::string> metric_columns(Game game);

struct AggregateOptions {
    maze::ExplorBasis explor_basis = maze::ExplorBasis::AllCells;
};

/// Means per (model, level) plus a pooled "all" row per model. Empty buckets
/// produce no row. Throws GameError(MixedGames).
MetricsReport aggregate(std::vector<EpisodeLog> logs, AggregateOptions options = {});

/// CSV for one level (or "all") with exactly the table columns.
std::string to_csv(const MetricsReport& report, const std::string& level);
nlohmann::json to_json(const MetricsReport& report);

/// "steps,count" pairs per model, bin width one step.
std::string steps_histogram_csv(const std::vector<EpisodeLog>& logs);

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteOptions {
    PolicyContext context;
    int workers = 0;                // 0 = hardware concurrency
    std::filesystem::path out_dir;  // nothing is written when empty
    AggregateOptions aggregate;
};

struct SuiteResult {
    MetricsReport report;
    std::vector<EpisodeLog> logs;  // agent-major, instance order within an agent
    std::vector<std::string> aborted;
};

SuiteResult run_suite(const std::vector<level_gen::Instance>& instances,
                      const std::vector<std::shared_ptr<const Agent>>& agents, const SuiteOptions& options);

/// Writes logs/<agent>/<game>_<level>_<seed>.jsonl, report_<level>.csv,
/// report.json, steps_histogram.csv and run_manifest.json.
void write_suite_outputs(const std::filesystem::path& dir, const SuiteResult& result, const RunFlags& flags);

std::vector<EpisodeLog> read_logs(const std::filesystem::path& dir);  // recursive *.jsonl

}  // namespace arena::harness
