#include "arena/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace arena::harness {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Episodes
// ---------------------------------------------------------------------------

namespace {

const std::string& decisive(const AgentReply& reply) {
    static const std::string empty;
    return reply.responses.empty() ? empty : reply.responses.back();
}

EpisodeLog run_maze(const level_gen::Instance& instance, const Agent& agent, const PolicyContext& ctx) {
    MazeEpisode ep(instance.maze(), instance.seed, agent.id(), ctx.flags);
    while (!ep.done()) {
        AgentReply reply;
        try {
            reply = agent.act_maze(ep.state(), ctx);
        } catch (const GameError& e) {
            if (e.code() != ErrorCode::BackendUnavailable) throw;
            ep.abort(e.what());
            break;
        }
        const auto action = gateway::parse_maze_action(decisive(reply));
        ep.step(action ? std::optional<int>(action->id()) : std::nullopt, std::move(reply.responses),
                std::move(reply.exchange));
    }
    return ep.log();
}

EpisodeLog run_match2(const level_gen::Instance& instance, const Agent& agent, const PolicyContext& ctx) {
    Match2Episode ep(instance.match2(), agent.id(), ctx.flags);
    const int cap = kMatch2DecisionFactor * ep.state().max_steps;
    while (!ep.done()) {
        if (ep.decisions() >= cap) {
            ep.stop_at_safety_cap();
            break;
        }
        AgentReply reply;
        try {
            reply = agent.act_match2(ep.state(), ctx);
        } catch (const GameError& e) {
            if (e.code() != ErrorCode::BackendUnavailable) throw;
            ep.abort(e.what());
            break;
        }
        const auto parsed = gateway::parse_match2_action(decisive(reply));
        ep.step(parsed, std::move(reply.responses), std::move(reply.exchange));
    }
    return ep.log();
}

ReplayResult mismatch(int step, std::string reason) { return {false, step, std::move(reason)}; }

std::optional<ReplayResult> compare_step(const StepRecord& want, const StepRecord& got) {
    if (got.reward_delta != want.reward_delta)
        return mismatch(want.index, "reward_delta " + std::to_string(want.reward_delta) + " != replayed " +
                                        std::to_string(got.reward_delta));
    if (got.score_after != want.score_after)
        return mismatch(want.index, "score_after " + std::to_string(want.score_after) + " != replayed " +
                                        std::to_string(got.score_after));
    if (got.digest != want.digest) return mismatch(want.index, "state digest differs");
    return std::nullopt;
}

ReplayResult compare_terminal(const EpisodeLog& want, const EpisodeLog& got) {
    if (want.terminal.aborted) return {true, -1, "aborted log: steps verified"};
    if (got.terminal.status != want.terminal.status)
        return mismatch(-1, "terminal status " + want.terminal.status + " != replayed " + got.terminal.status);
    if (got.terminal.metrics != want.terminal.metrics) return mismatch(-1, "terminal metrics differ");
    return {true, -1, {}};
}

ReplayResult replay_maze(const EpisodeLog& log) {
    MazeEpisode ep(maze::maze_config_from_json(log.header.config), log.header.seed, log.header.agent_id,
                   log.header.flags);
    for (const StepRecord& rec : log.steps) {
        if (ep.done()) return mismatch(rec.index, "log continues after the replayed episode ended");
        std::optional<int> id;
        if (rec.kind == "action") {
            if (!rec.action.is_number_integer()) return mismatch(rec.index, "action is not an id");
            id = rec.action.get<int>();
        }
        StepRecord got;
        try {
            got = ep.step(id);
        } catch (const GameError& e) {
            return mismatch(rec.index, std::string("engine rejected action: ") + e.what());
        }
        if (auto m = compare_step(rec, got)) return *m;
    }
    if (log.terminal.finalized_by == "timeout") ep.expire();
    return compare_terminal(log, ep.log());
}

ReplayResult replay_match2(const EpisodeLog& log) {
    Match2Episode ep(level_gen::match2_config_from_json(log.header.config), log.header.agent_id, log.header.flags);
    for (const StepRecord& rec : log.steps) {
        if (ep.done()) return mismatch(rec.index, "log continues after the replayed episode ended");
        gateway::Match2Parse parsed = gateway::ParseFailure{"recorded as invalid"};
        if (rec.kind == "action" || rec.kind == "rejected") {
            parsed = gateway::parse_match2_action(json{{"action", rec.action}}.dump());
            if (!std::holds_alternative<match2::MatchAction>(parsed))
                return mismatch(rec.index, "recorded action does not parse");
        } else if (rec.kind == "noop") {
            parsed = gateway::NoAction{};
        }
        std::vector<std::string> responses = rec.responses;
        if (responses.empty()) responses.emplace_back();
        const StepRecord got = ep.step(parsed, std::move(responses));
        if (got.kind != rec.kind) return mismatch(rec.index, "step kind " + rec.kind + " != replayed " + got.kind);
        if (auto m = compare_step(rec, got)) return *m;
    }
    if (log.terminal.finalized_by == "timeout") ep.expire();
    if (log.terminal.finalized_by == "safety_cap") ep.stop_at_safety_cap();
    return compare_terminal(log, ep.log());
}

}  // namespace

EpisodeLog run_episode(const level_gen::Instance& instance, const Agent& agent, const PolicyContext& ctx) {
    return instance.game == Game::Maze ? run_maze(instance, agent, ctx) : run_match2(instance, agent, ctx);
}

ReplayResult replay_verify(const EpisodeLog& log) {
    if (config_hash(log.header.config) != log.header.config_hash)
        return mismatch(-1, "config hash does not match the header config");
    try {
        return log.header.game == Game::Maze ? replay_maze(log) : replay_match2(log);
    } catch (const std::exception& e) {
        return mismatch(-1, std::string("replay failed: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kMazeColumns = {"Model",       "Samp.",  "Suc.Rate", "A.Score", "A.steps",
                                               "A.Explor.",   "A.Gold", "Rem.HP",   "A.kills", "A.Barr."};
const std::vector<std::string> kMatch2Columns = {"Model",      "Sample",     "Suc.Rate",  "A.score",
                                                 "R/M.S",      "Score/Step", "Clear/Step", "API Eff."};

constexpr int kMetricOffset = 2;

const std::vector<std::string> kLevelOrder = {"easy", "medium", "hard", "all"};

// Per-episode metric vector aligned with metric_columns().
std::vector<double> episode_values(const EpisodeLog& log, const AggregateOptions& options) {
    const json& m = log.terminal.metrics;
    const double success = m.at("success").get<bool>() ? 100.0 : 0.0;
    if (log.header.game == Game::Maze) {
        const double explor = options.explor_basis == maze::ExplorBasis::NonWallCells && m.contains("explor_nonwall")
                                  ? m["explor_nonwall"].get<double>()
                                  : m.at("explor").get<double>();
        return {success,
                m.at("score").get<double>(),
                m.at("steps").get<double>(),
                explor,
                m.at("gold").get<double>(),
                m.at("rem_hp").get<double>(),
                m.at("kills").get<double>(),
                m.at("barr").get<double>()};
    }
    return {success,
            m.at("score").get<double>(),
            m.at("rms").get<double>(),
            m.at("score_per_step").get<double>(),
            m.at("clear_per_step").get<double>(),
            m.at("api_eff").get<double>()};
}

ReportRow mean_row(const std::string& model, const std::string& level, const std::vector<std::vector<double>>& rows) {
    ReportRow out{model, level, static_cast<int>(rows.size()), std::vector<double>(rows.front().size(), 0.0)};
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) out.values[i] += r[i];
    for (double& v : out.values) v /= static_cast<double>(rows.size());
    return out;
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Human rows have no meaningful API efficiency; the table prints a dash.
bool blank_cell(Game game, const ReportRow& row, std::size_t metric) {
    return game == Game::Match2 && row.model == "human" && metric == 5;
}

}  // namespace

const std::vector<std::string>& table_columns(Game game) { return game == Game::Maze ? kMazeColumns : kMatch2Columns; }

std::vector<std::string> metric_columns(Game game) {
    const auto& all = table_columns(game);
    return {all.begin() + kMetricOffset, all.end()};
}

double ReportRow::value(const std::string& column, Game game) const {
    const auto cols = metric_columns(game);
    const auto it = std::find(cols.begin(), cols.end(), column);
    if (it == cols.end()) throw GameError(ErrorCode::InvalidConfig, "no report column '" + column + "'");
    return values.at(static_cast<std::size_t>(it - cols.begin()));
}

const ReportRow* MetricsReport::find(const std::string& model, const std::string& level) const {
    for (const auto& r : rows)
        if (r.model == model && r.level == level) return &r;
    return nullptr;
}

MetricsReport aggregate(std::vector<EpisodeLog> logs, AggregateOptions options) {
    MetricsReport report;
    if (logs.empty()) return report;
    report.game = logs.front().header.game;
    for (const auto& l : logs)
        if (l.header.game != report.game) throw GameError(ErrorCode::MixedGames, "logs mix maze and match-2 episodes");

    // A fixed summation order keeps the means independent of input order.
    std::sort(logs.begin(), logs.end(), [](const EpisodeLog& a, const EpisodeLog& b) {
        const auto ka = std::make_tuple(a.header.agent_id, level_index(a.header.level), a.header.seed);
        const auto kb = std::make_tuple(b.header.agent_id, level_index(b.header.level), b.header.seed);
        if (ka != kb) return ka < kb;
        return a.to_jsonl() < b.to_jsonl();
    });

    std::map<std::string, std::map<int, std::vector<std::vector<double>>>> buckets;
    for (const auto& l : logs) {
        if (l.terminal.aborted || l.terminal.metrics.is_null()) {
            ++report.aborted;
            continue;
        }
        buckets[l.header.agent_id][level_index(l.header.level)].push_back(episode_values(l, options));
    }
    for (const auto& [model, levels] : buckets) {
        std::vector<std::vector<double>> pooled;
        for (const auto& [idx, rows] : levels) {
            report.rows.push_back(mean_row(model, kLevelOrder[static_cast<std::size_t>(idx)], rows));
            pooled.insert(pooled.end(), rows.begin(), rows.end());
        }
        report.rows.push_back(mean_row(model, "all", pooled));
    }
    return report;
}

std::string to_csv(const MetricsReport& report, const std::string& level) {
    std::ostringstream out;
    const auto& cols = table_columns(report.game);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i]);
    out << "\n";
    for (const auto& row : report.rows) {
        if (row.level != level) continue;
        out << csv_field(row.model) << "," << row.samples;
        for (std::size_t i = 0; i < row.values.size(); ++i)
            out << "," << (blank_cell(report.game, row, i) ? std::string("--") : fixed2(row.values[i]));
        out << "\n";
    }
    return out.str();
}

json to_json(const MetricsReport& report) {
    const auto& cols = table_columns(report.game);
    json levels = json::object();
    for (const auto& row : report.rows) {
        json r{{cols[0], row.model}, {cols[1], row.samples}};
        for (std::size_t i = 0; i < row.values.size(); ++i)
            r[cols[i + kMetricOffset]] = blank_cell(report.game, row, i) ? json(nullptr) : json(row.values[i]);
        levels[row.level].push_back(std::move(r));
    }
    return json{{"game", to_string(report.game)}, {"columns", cols}, {"levels", levels}, {"aborted", report.aborted}};
}

std::string steps_histogram_csv(const std::vector<EpisodeLog>& logs) {
    std::map<std::string, std::map<int, int>> bins;
    for (const auto& l : logs) {
        if (l.terminal.aborted || l.terminal.metrics.is_null()) continue;
        const json& m = l.terminal.metrics;
        const int steps = l.header.game == Game::Maze ? m.at("steps").get<int>() : m.at("steps_used").get<int>();
        ++bins[l.header.agent_id][steps];
    }
    std::ostringstream out;
    out << "agent,steps,count\n";
    for (const auto& [agent, counts] : bins)
        for (const auto& [steps, n] : counts) out << csv_field(agent) << "," << steps << "," << n << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

SuiteResult run_suite(const std::vector<level_gen::Instance>& instances,
                      const std::vector<std::shared_ptr<const Agent>>& agents, const SuiteOptions& options) {
    const std::size_t total = instances.size() * agents.size();
    std::vector<EpisodeLog> logs(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                const Agent& agent = *agents[i / instances.size()];
                logs[i] = run_episode(instances[i % instances.size()], agent, options.context);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = options.workers > 0 ? static_cast<unsigned>(options.workers) : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    SuiteResult result;
    for (const auto& l : logs)
        if (l.terminal.aborted) result.aborted.push_back(l.episode_id());
    result.report = aggregate(logs, options.aggregate);
    result.logs = std::move(logs);
    if (!options.out_dir.empty()) write_suite_outputs(options.out_dir, result, options.context.flags);
    return result;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GameError(ErrorCode::InvalidConfig, "cannot write " + path.string());
    out << text;
}

}  // namespace

void write_suite_outputs(const fs::path& dir, const SuiteResult& result, const RunFlags& flags) {
    fs::create_directories(dir / "logs");
    json episodes = json::array();
    for (const auto& l : result.logs) {
        const fs::path agent_dir = dir / "logs" / l.header.agent_id;
        fs::create_directories(agent_dir);
        const std::string name = std::string(to_string(l.header.game)) + "_" + std::string(to_string(l.header.level)) +
                                 "_" + std::to_string(l.header.seed) + ".jsonl";
        write_log((agent_dir / name).string(), l);
        episodes.push_back({{"episode_id", l.episode_id()},
                            {"log", (fs::path("logs") / l.header.agent_id / name).generic_string()},
                            {"status", l.terminal.status},
                            {"aborted", l.terminal.aborted}});
    }
    for (const auto& level : kLevelOrder) {
        const bool any = std::any_of(result.report.rows.begin(), result.report.rows.end(),
                                     [&](const ReportRow& r) { return r.level == level; });
        if (any) write_text(dir / ("report_" + level + ".csv"), to_csv(result.report, level));
    }
    write_text(dir / "report.json", to_json(result.report).dump(2) + "\n");
    write_text(dir / "steps_histogram.csv", steps_histogram_csv(result.logs));
    const json manifest{{"flags", {{"full_vision", flags.full_vision}, {"no_props", flags.no_props}}},
                        {"episodes", episodes},
                        {"completed", result.logs.size() - result.aborted.size()},
                        {"aborted", result.aborted}};
    write_text(dir / "run_manifest.json", manifest.dump(2) + "\n");
}

std::vector<EpisodeLog> read_logs(const fs::path& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    std::vector<EpisodeLog> logs;
    logs.reserve(paths.size());
    for (const auto& p : paths) logs.push_back(read_log(p.string()));
    return logs;
}

}  // namespace arena::harness
