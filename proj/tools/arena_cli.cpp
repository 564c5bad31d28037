#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "arena/expver.hpp"
#include "arena/harness.hpp"
#include "arena/level_gen.hpp"
#include "arena/session.hpp"

namespace fs = std::filesystem;
using namespace arena;

namespace {

std::vector<Level> levels_from(const std::vector<std::string>& names) {
    std::vector<Level> out;
    for (const auto& n : names) {
        if (n == "all") return {Level::Easy, Level::Medium, Level::Hard};
        out.push_back(parse_level(n));
    }
    return out;
}

std::shared_ptr<gateway::ChatBackend> backend_from(const std::string& path) {
    if (path.empty()) return nullptr;
    return std::make_shared<gateway::HttpChatBackend>(gateway::load_backend_config(path));
}

std::shared_ptr<const harness::Agent> agent_from(const std::string& name,
                                                 const std::shared_ptr<gateway::ChatBackend>& backend,
                                                 const std::string& backend_path) {
    if (name == "llm" && backend)
        return harness::make_agent("llm:" + gateway::load_backend_config(backend_path).model, backend);
    return harness::make_agent(name, backend);
}

harness::AggregateOptions aggregate_options(const std::string& basis) {
    harness::AggregateOptions o;
    if (basis == "non-wall") o.explor_basis = maze::ExplorBasis::NonWallCells;
    return o;
}

void print_report(const harness::MetricsReport& report) {
    for (const std::string level : {"easy", "medium", "hard", "all"}) {
        const bool any = std::any_of(report.rows.begin(), report.rows.end(),
                                     [&](const harness::ReportRow& r) { return r.level == level; });
        if (!any) continue;
        std::cout << "[" << level << "]\n" << harness::to_csv(report, level) << "\n";
    }
    if (report.aborted > 0) std::cout << "aborted episodes excluded: " << report.aborted << "\n";
}

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maze and match-2 agent benchmark workbench"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an instance suite");
    std::string gen_game;
    std::vector<std::string> gen_levels{"all"};
    int gen_count = 30;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "suite";
    gen->add_option("--game", gen_game, "maze or match2")->required();
    gen->add_option("--level", gen_levels, "easy, medium, hard or all (repeatable)");
    gen->add_option("--count", gen_count, "Instances per level")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "First seed; later instances use consecutive seeds");
    gen->add_option("--out", gen_out, "Output directory");

    // run
    auto* run = app.add_subcommand("run", "Run agents over a suite");
    std::string run_suite_path;
    std::vector<std::string> run_agents;
    std::string run_backend;
    bool run_full_vision = false;
    bool run_no_props = false;
    std::string run_out = "run";
    int run_workers = 0;
    std::string run_basis = "all";
    run->add_option("--suite", run_suite_path, "Suite manifest.json")->required()->check(CLI::ExistingFile);
    run->add_option("--agent", run_agents, "bfs, frontier, greedy or llm (repeatable)")->required();
    run->add_option("--backend-config", run_backend, "Chat backend JSON config")->check(CLI::ExistingFile);
    auto* fv = run->add_flag("--full-vision", run_full_vision, "Lift the maze fog");
    run->add_flag("--no-props", run_no_props, "Empty the match-2 inventory")->excludes(fv);
    run->add_option("--out", run_out, "Output directory");
    run->add_option("--workers", run_workers, "Parallel episodes (0 = hardware threads)");
    run->add_option("--explor-basis", run_basis, "Exploration denominator: all or non-wall")
        ->check(CLI::IsMember({"all", "non-wall"}));

    // expver
    auto* ev = app.add_subcommand("expver", "Experience/truth training loop");
    std::string ev_train;
    std::string ev_test;
    int ev_rounds = 0;
    bool ev_no_tw = false;
    std::string ev_agent = "llm";
    std::string ev_backend;
    std::string ev_repo = "truths.json";
    std::string ev_out = "expver";
    int ev_workers = 1;
    bool ev_full_vision = false;
    bool ev_no_props = false;
    int ev_k = expver::kDefaultHighlightBudget;
    ev->add_option("--train-suite", ev_train, "Training manifest.json")->required()->check(CLI::ExistingFile);
    ev->add_option("--test-suite", ev_test, "Held-out manifest.json")->required()->check(CLI::ExistingFile);
    ev->add_option("--rounds", ev_rounds, "Training rounds")->required()->check(CLI::NonNegativeNumber);
    ev->add_flag("--no-truthweaver", ev_no_tw, "Append verified truths without the organizer pass");
    ev->add_option("--agent", ev_agent, "Policy agent");
    ev->add_option("--backend-config", ev_backend, "Chat backend JSON config")->required()->check(CLI::ExistingFile);
    ev->add_option("--repo", ev_repo, "Truth repository file (created if missing)");
    ev->add_option("--out", ev_out, "Output directory for logs and the training report");
    ev->add_option("--workers", ev_workers, "Parallel test episodes");
    ev->add_option("--highlights", ev_k, "Highlight budget")->check(CLI::Range(2, 1000));
    auto* ev_fv = ev->add_flag("--full-vision", ev_full_vision, "Lift the maze fog");
    ev->add_flag("--no-props", ev_no_props, "Empty the match-2 inventory")->excludes(ev_fv);

    // metrics
    auto* met = app.add_subcommand("metrics", "Aggregate episode logs");
    std::string met_dir;
    std::string met_out;
    std::string met_basis = "all";
    met->add_option("--logs-dir", met_dir, "Directory searched recursively for *.jsonl")
        ->required()
        ->check(CLI::ExistingDirectory);
    met->add_option("--out", met_out, "Also write report.json here");
    met->add_option("--explor-basis", met_basis, "Exploration denominator: all or non-wall")
        ->check(CLI::IsMember({"all", "non-wall"}));

    // replay
    auto* rep = app.add_subcommand("replay", "Verify a log against a fresh engine");
    std::string rep_log;
    rep->add_option("--log", rep_log, "Episode log (.jsonl)")->required()->check(CLI::ExistingFile);

    // serve
    auto* srv = app.add_subcommand("serve", "Session service for human and remote play");
    session::ServerOptions srv_opts;
    std::string srv_logs = "human_logs";
    srv->add_option("--port", srv_opts.port, "TCP port");
    srv->add_option("--host", srv_opts.host, "Bind address");
    srv->add_option("--ui-dir", srv_opts.ui_dir, "Static UI bundle mounted at /")->check(CLI::ExistingDirectory);
    srv->add_option("--log-dir", srv_logs, "Where finished episode logs are written");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto manifest = level_gen::write_suite(gen_out, parse_game(gen_game), levels_from(gen_levels),
                                                         gen_count, gen_seed);
            std::cout << manifest.string() << "\n";
        } else if (*run) {
            const auto backend = backend_from(run_backend);
            std::vector<std::shared_ptr<const harness::Agent>> agents;
            for (const auto& a : run_agents) agents.push_back(agent_from(a, backend, run_backend));
            harness::SuiteOptions opts;
            opts.context.flags = {run_full_vision, run_no_props};
            opts.workers = run_workers;
            opts.out_dir = run_out;
            opts.aggregate = aggregate_options(run_basis);
            const auto result = harness::run_suite(level_gen::load_suite(run_suite_path), agents, opts);
            print_report(result.report);
            std::cout << "logs written to " << (fs::path(run_out) / "logs").string() << "\n";
        } else if (*ev) {
            const auto backend = backend_from(ev_backend);
            const auto agent = agent_from(ev_agent, backend, ev_backend);
            expver::TrainingOptions opts;
            opts.rounds = ev_rounds;
            opts.no_truthweaver = ev_no_tw;
            opts.highlight_budget = ev_k;
            opts.workers = ev_workers;
            opts.context.flags = {ev_full_vision, ev_no_props};
            opts.log_dir = fs::path(ev_out) / "logs";
            const auto report = expver::training_loop(level_gen::load_suite(ev_train), level_gen::load_suite(ev_test),
                                                      *agent, *backend, expver::load_repository(ev_repo), opts);
            expver::save_repository(ev_repo, report.repo);
            fs::create_directories(ev_out);
            std::ofstream(fs::path(ev_out) / "training_report.json") << expver::to_json(report).dump(2) << "\n";
            for (const auto& r : report.rounds)
                std::cout << expver::to_json(r).dump() << "\n";
            if (report.aborted) {
                std::cerr << "training aborted: " << report.abort_reason << "\n";
                return 2;
            }
        } else if (*met) {
            const auto report = harness::aggregate(harness::read_logs(met_dir), aggregate_options(met_basis));
            print_report(report);
            if (!met_out.empty()) {
                fs::create_directories(met_out);
                std::ofstream(fs::path(met_out) / "report.json") << harness::to_json(report).dump(2) << "\n";
            }
        } else if (*rep) {
            const auto result = harness::replay_verify(harness::read_log(rep_log));
            if (result.ok) {
                std::cout << "OK\n";
                return 0;
            }
            std::cout << "MISMATCH";
            if (result.divergent_step >= 0) std::cout << " at step " << result.divergent_step;
            std::cout << ": " << result.reason << "\n";
            return 1;
        } else if (*srv) {
            session::SessionManager manager({srv_logs, session::kIdleTimeout, {}});
            session::Server server(manager, srv_opts);
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::atomic<bool> done{false};
            std::thread watcher([&] {
                while (!done && !g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(200));
                if (g_interrupted) server.stop();
            });
            std::cout << "serving on http://" << srv_opts.host << ":" << srv_opts.port << "\n" << std::flush;
            server.run();
            done = true;
            watcher.join();
        }
    } catch (const GameError& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
