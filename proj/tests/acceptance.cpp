// Acceptance runner: one PASS/FAIL line per criterion, each under its time limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "curriculum.hpp"
#include "arena/expver.hpp"
#include "arena/harness.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace arena;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    std::vector<std::string> failures;
    std::string note;

    void expect(bool ok, const std::string& what) {
        if (!ok && failures.size() < 5) failures.push_back(what);
        if (!ok && failures.size() == 5) failures.push_back("...");
    }
    bool ok() const { return failures.empty(); }
};

struct Criterion {
    int number;
    std::string title;
    double limit_s;
    std::function<void(Verdict&)> body;
};

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1
// ---------------------------------------------------------------------------

void match2_scoring(Verdict& v) {
    v.expect(match2::score_elimination(3) == 18, "score_elimination(3) != 18");
    v.expect(match2::score_elimination(5) == 34, "score_elimination(5) != 34");
    for (int n = 2; n <= 64; ++n)
        v.expect(match2::score_elimination(n) == oracle::literal_elimination_score(n), "n=" + std::to_string(n));

    // the engine charges the same amount for a real clear of every group size it meets
    Rng rng(2024);
    for (int b = 0; b < 50; ++b) {
        match2::MatchState s;
        s.rng = Rng(static_cast<std::uint64_t>(b));
        for (auto& row : s.board)
            for (auto& c : row) c = static_cast<match2::Color>(rng.below(match2::kColors));
        s.max_steps = s.steps_remaining = 10;
        s.targets = {99, 99, 99, 99};
        for (const auto& group : oracle::brute_force_groups(s.board)) {
            const auto [r, c] = *group.begin();
            const auto t = match2::apply_action(s, match2::Eliminate{{r, c}});
            const int n = static_cast<int>(group.size());
            v.expect(t.result.score_delta == oracle::literal_elimination_score(n),
                     "engine clear of " + std::to_string(n));
        }
    }
    v.note = "n in [2,64] plus engine clears on 50 boards";
}

// ---------------------------------------------------------------------------
// 2
// ---------------------------------------------------------------------------

maze::MazeState walk(maze::MazeState s, std::initializer_list<int> ids) {
    for (int id : ids) s = maze::apply_action_id(s, id).state;
    return s;
}

void maze_scoring(Verdict& v) {
    using namespace maze;
    const MazeState before = walk(init(fixture::coin_approach(), 1), {9, 0, 6, 0});
    v.expect(before.agent == Pos{6, 0}, "approach path did not reach (6,0)");
    const auto t = apply_action_id(before, 9);
    v.expect(t.result.reward_delta == 460, "coin-adjacent Right-1 gave " + std::to_string(t.result.reward_delta));

    const MazeState s0 = init(fixture::coin_approach(), 1);
    // explore +10 per cell
    v.expect(apply_action_id(s0, 9).result.reward_delta == -50 + 2 * 10, "explore");
    // step -50 alone
    v.expect(apply_action_id(walk(s0, {9}), 6).result.reward_delta == -50, "bare step");
    // coin +500
    {
        auto c = fixture::maze({"G.......C", ".........", "........C", ".........", "........C", ".........",
                                "........C", ".........", ".C......."},
                               {8, 0});
        v.expect(apply_action_id(walk(init(c, 1), {0, 9}), 3).result.reward_delta == -50 + 500, "coin");
    }
    // life lost -1000
    {
        auto c = fixture::maze({"G.......C", "........C", "........C", "........C", "........C", ".........",
                                ".........", ".........", ".#......."},
                               {8, 0});
        const auto hit = apply_action_id(init(c, 1), 9);
        v.expect(hit.result.reward_delta == -50 - 1000 && hit.state.lives == 2, "life lost");
    }
    // goal +2000
    {
        auto c = fixture::maze({"........C", "........C", "........C", "........C", "........C", ".........",
                                ".........", ".........", ".G......."},
                               {8, 0});
        const auto g = apply_action_id(init(c, 1), 9);
        v.expect(g.result.reward_delta == -50 + 20 + 2000 && g.state.status == Status::Success, "goal");
    }
    v.note = "+460 and five constants";
}

// ---------------------------------------------------------------------------
// 3
// ---------------------------------------------------------------------------

match2::Board random_board(Rng& rng) {
    match2::Board b{};
    for (auto& row : b)
        for (auto& c : row) c = static_cast<match2::Color>(rng.below(match2::kColors));
    return b;
}

void group_equivalence(Verdict& v) {
    Rng rng(31337);
    for (int i = 0; i < 1000; ++i) {
        const auto b = random_board(rng);
        std::set<std::set<std::pair<int, int>>> engine;
        for (const auto& g : match2::find_groups(b)) {
            std::set<std::pair<int, int>> cells;
            for (Pos p : g.cells) cells.insert({p.row, p.col});
            engine.insert(cells);
        }
        v.expect(engine == oracle::brute_force_groups(b), "board " + std::to_string(i));
    }
    v.note = "1000 boards";
}

// ---------------------------------------------------------------------------
// 4
// ---------------------------------------------------------------------------

// Cells an action removes, worked out from the rules rather than the engine.
std::set<std::pair<int, int>> expected_clear(const match2::Board& b, const match2::MatchAction& a) {
    using namespace match2;
    std::set<std::pair<int, int>> out;
    if (const auto* e = std::get_if<Eliminate>(&a)) {
        for (const auto& g : oracle::brute_force_groups(b))
            if (g.count({e->pos.row, e->pos.col})) out = g;
    } else if (const auto* r = std::get_if<RowClear>(&a)) {
        for (int c = 0; c < kSize; ++c) out.insert({r->index, c});
    } else if (const auto* c = std::get_if<ColClear>(&a)) {
        for (int r = 0; r < kSize; ++r) out.insert({r, c->index});
    } else if (const auto* bomb = std::get_if<Bomb>(&a)) {
        for (int r = bomb->pos.row - 1; r <= bomb->pos.row + 1; ++r)
            for (int c = bomb->pos.col - 1; c <= bomb->pos.col + 1; ++c)
                if (r >= 0 && r < kSize && c >= 0 && c < kSize) out.insert({r, c});
    } else {
        const auto& h = std::get<Hammer>(a);
        out.insert({h.pos.row, h.pos.col});
    }
    return out;
}

void gravity_invariants(Verdict& v) {
    using namespace match2;
    Rng pick(4242);
    int actions = 0;
    for (std::uint64_t seed = 0; actions < 10000; ++seed) {
        MatchState s;
        s.rng = Rng(seed);
        s.board = random_board(s.rng);
        s.max_steps = s.steps_remaining = 60;
        s.inventory = {3, 3, 3, 3};
        s.targets = {9999, 9999, 9999, 9999};
        while (!s.terminal() && actions < 10000) {
            const auto legal = legal_actions(s);
            if (legal.empty()) break;
            const auto& a = legal[pick.below(static_cast<int>(legal.size()))];
            const auto gone = expected_clear(s.board, a);
            const auto t = apply_action(s, a);
            ++actions;

            int before = 0, after = 0, empties = 0;
            std::array<int, kColors> census{};
            for (const auto& [r, c] : gone) ++census[static_cast<int>(s.board[r][c])];
            for (int c = 0; c < kColors; ++c) {
                before += s.eliminated[c];
                after += t.state.eliminated[c];
            }
            v.expect(after - before == static_cast<int>(gone.size()), "eliminated total off");
            v.expect(t.result.cleared == census, "per-colour clear census off");
            v.expect(t.result.refilled == static_cast<int>(gone.size()), "refill count differs from clear count");

            for (int c = 0; c < kSize; ++c) {
                // survivors of this column, top to bottom, must now sit at the bottom in the same order
                std::vector<Color> survivors;
                for (int r = 0; r < kSize; ++r)
                    if (!gone.count({r, c})) survivors.push_back(s.board[r][c]);
                const int offset = kSize - static_cast<int>(survivors.size());
                for (std::size_t k = 0; k < survivors.size(); ++k)
                    v.expect(t.state.board[offset + static_cast<int>(k)][c] == survivors[k], "floating or reordered tile");
                for (int r = 0; r < kSize; ++r) empties += t.state.board[r][c] == Color::Empty ? 1 : 0;
            }
            v.expect(empties == 0, "empty cell after refill");
            s = t.state;
        }
    }
    v.note = std::to_string(actions) + " actions";
}

// ---------------------------------------------------------------------------
// 5
// ---------------------------------------------------------------------------

harness::FunctionAgent random_match2_agent() {
    return harness::FunctionAgent(
        "random", [](const maze::MazeState&, const harness::PolicyContext&) { return std::string(); },
        [](const match2::MatchState& s, const harness::PolicyContext&) {
            const auto legal = match2::legal_actions(s);
            if (legal.empty()) return match2::format_action(std::nullopt);
            Rng r(mix_seed(static_cast<std::uint64_t>(s.steps_used()), static_cast<std::uint64_t>(s.score + 100000)));
            return match2::format_action(legal[r.below(static_cast<int>(legal.size()))]);
        });
}

void determinism(Verdict& v) {
    const harness::MazeFrontierAgent frontier;
    const harness::Match2GreedyAgent greedy;
    const auto random = random_match2_agent();
    const harness::PolicyContext ctx;
    int episodes = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Level level = static_cast<Level>(seed % 3);
        const auto mi = level_gen::make_instance(Game::Maze, level, seed);
        const auto m1 = harness::run_episode(mi, frontier, ctx).to_jsonl();
        const auto m2 = harness::run_episode(mi, frontier, ctx).to_jsonl();
        v.expect(m1 == m2, "maze log differs, seed " + std::to_string(seed));
        v.expect(harness::replay_verify(harness::EpisodeLog::from_jsonl(m1)).ok, "maze replay, seed " + std::to_string(seed));

        const harness::Agent& agent = seed % 2 ? static_cast<const harness::Agent&>(greedy) : random;
        const auto gi = level_gen::make_instance(Game::Match2, level, seed);
        const auto g1 = harness::run_episode(gi, agent, ctx).to_jsonl();
        const auto g2 = harness::run_episode(gi, agent, ctx).to_jsonl();
        v.expect(g1 == g2, "match-2 log differs, seed " + std::to_string(seed));
        v.expect(harness::replay_verify(harness::EpisodeLog::from_jsonl(g1)).ok, "match-2 replay, seed " + std::to_string(seed));
        episodes += 2;
    }
    v.note = std::to_string(episodes) + " episodes, each run twice";
}

// ---------------------------------------------------------------------------
// 6
// ---------------------------------------------------------------------------

void solvability(Verdict& v) {
    struct Interval { int lo, hi; };
    // per level: step budget and per-colour target
    const Interval steps[3] = {{15, 18}, {12, 15}, {10, 13}};
    const Interval targets[3] = {{8, 12}, {12, 16}, {16, 20}};
    int mazes = 0;
    for (Level level : {Level::Easy, Level::Medium, Level::Hard}) {
        for (std::uint64_t seed = 0; seed < 1000; ++seed, ++mazes) {
            const auto cfg = level_gen::gen_maze(level, seed);
            v.expect(level_gen::verify_solvable(cfg), "unsolvable maze " + std::string(to_string(level)) + " " + std::to_string(seed));
            const auto reach = oracle::reachable_cells(cfg);
            v.expect(reach.count(cfg.goal()) > 0, "oracle: goal unreachable");
            for (int r = 0; r < maze::kSize; ++r)
                for (int c = 0; c < maze::kSize; ++c)
                    if (cfg.grid[r][c] == maze::Cell::Coin || cfg.grid[r][c] == maze::Cell::Key)
                        v.expect(reach.count(Pos{r, c}) > 0, "oracle: coin or key unreachable");

            const auto m = level_gen::gen_match2(level, seed);
            const int li = level_index(level);
            v.expect(m.max_steps >= steps[li].lo && m.max_steps <= steps[li].hi, "match-2 steps out of range");
            for (int t : m.targets) v.expect(t >= targets[li].lo && t <= targets[li].hi, "match-2 target out of range");
        }
    }
    v.note = std::to_string(mazes) + " mazes and match-2 instances";
}

// ---------------------------------------------------------------------------
// 7
// ---------------------------------------------------------------------------

void scripted_sanity(Verdict& v) {
    harness::PolicyContext full;
    full.flags.full_vision = true;
    const harness::PolicyContext fog;
    int bfs_wins = 0, frontier_wins = 0;
    const int n = 30;
    for (std::uint64_t seed = 1; seed <= n; ++seed) {
        const auto inst = level_gen::make_instance(Game::Maze, Level::Easy, seed);
        const int shortest = oracle::shortest_action_path(inst.maze());
        const auto log = harness::run_episode(inst, harness::MazeBfsAgent{}, full);
        if (log.terminal.status == "success") ++bfs_wins;
        v.expect(log.terminal.metrics["steps"] == shortest, "bfs steps != shortest path, seed " + std::to_string(seed));
        if (harness::run_episode(inst, harness::MazeFrontierAgent{}, fog).terminal.status == "success") ++frontier_wins;
    }
    v.expect(bfs_wins == n, "full-vision bfs " + std::to_string(bfs_wins) + "/" + std::to_string(n));
    v.expect(frontier_wins * 10 >= n * 9, "frontier under fog " + std::to_string(frontier_wins) + "/" + std::to_string(n));
    v.note = "bfs " + std::to_string(bfs_wins) + "/30 at shortest length, frontier " + std::to_string(frontier_wins) + "/30";
}

// ---------------------------------------------------------------------------
// 8
// ---------------------------------------------------------------------------

void metrics_fixture(Verdict& v) {
    // maze trio: scores 100/200/300, one success, 62, 81 and 40 of 81 cells seen
    const auto maze = harness::aggregate(fixture::maze_trio());
    const auto* mr = maze.find("m", "easy");
    v.expect(mr != nullptr, "maze row missing");
    if (mr) {
        const auto check = [&](const char* col, double want) {
            v.expect(fmt2(mr->value(col, Game::Maze)) == fmt2(want), std::string(col) + " = " + fmt2(mr->value(col, Game::Maze)));
        };
        check("Suc.Rate", 100.0 * 1 / 3);
        check("A.Score", (100.0 + 200 + 300) / 3);
        check("A.Explor.", 100.0 * (62 + 81 + 40) / (81.0 * 3));
    }

    // match-2 trio: see fixture::match2_trio
    const auto m2 = harness::aggregate(fixture::match2_trio());
    const auto* gr = m2.find("m", "medium");
    v.expect(gr != nullptr, "match-2 row missing");
    if (gr) {
        const auto check = [&](const char* col, double want) {
            v.expect(fmt2(gr->value(col, Game::Match2)) == fmt2(want), std::string(col) + " = " + fmt2(gr->value(col, Game::Match2)));
        };
        check("Suc.Rate", 100.0 / 3);
        check("A.score", (220.0 + 100 + 40) / 3);
        check("R/M.S", (100.0 * 4 / 15 + 100.0 * 3 / 15 + 0.0) / 3);
        check("Clear/Step", (54.0 / 11 + 30.0 / 12 + 20.0 / 10) / 3);
        check("API Eff.", (70.0 + 100.0 + 50.0) / 3);
    }
    v.note = "A.Score, Suc.Rate, A.Explor, R/M.S, Clear/Step, API Eff";
}

// ---------------------------------------------------------------------------
// 9
// ---------------------------------------------------------------------------

void expver_gates(Verdict& v) {
    using namespace expver;
    const auto agent = curriculum::agent();

    // (a) promotion only on a successful replay with a strictly higher score
    {
        const auto inst = curriculum::instance(curriculum::train_map(), 1);
        const int base = curriculum::expected_score(curriculum::kBaseDelay);
        Experience helpful, neutral, harmful;
        helpful.strengths = {"skill-1"};
        neutral.strengths = {"nothing useful"};
        harmful.weaknesses = {"poison"};
        v.expect(verify(helpful, inst, *agent, {}, base).promoted, "(a) helpful not promoted");
        const auto n = verify(neutral, inst, *agent, {}, base);
        v.expect(n.replay_success && !n.promoted, "(a) equal score promoted");
        const auto h = verify(harmful, inst, *agent, {}, base);
        v.expect(!h.replay_success && !h.promoted, "(a) failed replay promoted");
    }

    // (b) a rejected round restores the repository byte for byte
    {
        TrainingOptions one;
        one.rounds = 1;
        curriculum::Analyst first({curriculum::summary("skill-1", "slow")});
        const auto seeded = training_loop(curriculum::train_set(), curriculum::test_set(), *agent, first, {}, one);
        const std::string snapshot = serialize(seeded.repo);
        curriculum::Analyst trap({curriculum::summary("a trap", "slow")});
        const auto after = training_loop(curriculum::train_set(), curriculum::test_set(), *agent, trap, seeded.repo, one);
        v.expect(!after.rounds.empty() && after.rounds[0].promoted && !after.rounds[0].accepted, "(b) trap round not rejected");
        v.expect(serialize(after.repo) == snapshot, "(b) repository changed after rejection");
    }

    // (c) accepted test score never drops over four scripted rounds
    {
        TrainingOptions opts;
        opts.rounds = 4;
        curriculum::Analyst analyst(curriculum::four_round_script());
        const auto report = training_loop(curriculum::train_set(), curriculum::test_set(), *agent, analyst, {}, opts);
        v.expect(report.rounds.size() == 4, "(c) expected four rounds");
        int rejected = 0;
        for (std::size_t i = 0; i < report.rounds.size(); ++i) {
            if (i > 0) v.expect(report.rounds[i].a_score >= report.rounds[i - 1].a_score, "(c) score dropped");
            rejected += report.rounds[i].promoted && !report.rounds[i].accepted ? 1 : 0;
        }
        v.expect(rejected >= 1, "(c) script never exercised the rollback");
    }

    // (d) without the organizer each accepted repository extends the previous one
    {
        TrainingOptions opts;
        opts.rounds = 1;
        opts.no_truthweaver = true;
        curriculum::Analyst analyst(curriculum::four_round_script());
        TruthRepository repo;
        std::vector<TruthRepository> accepted{repo};
        for (int round = 0; round < 4; ++round) {
            repo = training_loop(curriculum::train_set(), curriculum::test_set(), *agent, analyst, repo, opts).repo;
            if (serialize(repo) != serialize(accepted.back())) accepted.push_back(repo);
        }
        v.expect(analyst.organize_calls == 0, "(d) organizer was called");
        v.expect(accepted.size() >= 3, "(d) too few accepted rounds");
        for (std::size_t i = 1; i < accepted.size(); ++i) {
            const auto& prev = accepted[i - 1].truths;
            const auto& next = accepted[i].truths;
            bool prefix = next.size() > prev.size();
            for (std::size_t k = 0; prefix && k < prev.size(); ++k) prefix = next[k] == prev[k];
            v.expect(prefix, "(d) repository not append-only");
        }
    }
    v.note = "(a) (b) (c) (d)";
}

// ---------------------------------------------------------------------------
// 10
// ---------------------------------------------------------------------------

void ablation_direction(Verdict& v) {
    harness::PolicyContext full;
    full.flags.full_vision = true;
    const harness::PolicyContext fog;
    int full_wins = 0, fog_wins = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto inst = level_gen::make_instance(Game::Maze, static_cast<Level>(seed % 3), seed);
        full_wins += harness::run_episode(inst, harness::MazeBfsAgent{}, full).terminal.status == "success";
        fog_wins += harness::run_episode(inst, harness::MazeBfsAgent{}, fog).terminal.status == "success";
    }
    v.expect(full_wins >= fog_wins, "full vision " + std::to_string(full_wins) + " < fog " + std::to_string(fog_wins));

    // NoProps: nothing in the legal set, every prop rejected, and an episode that keeps trying never uses one
    harness::PolicyContext bare;
    bare.flags.no_props = true;
    const harness::FunctionAgent pusher(
        "pusher", [](const maze::MazeState&, const harness::PolicyContext&) { return std::string(); },
        [](const match2::MatchState& s, const harness::PolicyContext&) {
            if (s.api_calls % 2 == 0) return match2::format_action(match2::Bomb{{3, 3}});
            const auto legal = match2::legal_actions(s);
            return match2::format_action(legal.empty() ? std::nullopt : std::optional(legal.front()));
        });
    int rejected = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Level level = static_cast<Level>(seed % 3);
        const auto cfg = level_gen::gen_match2(level, seed);
        const auto s = level_gen::init_match2(cfg, true);
        for (const auto& a : match2::legal_actions(s)) v.expect(!match2::is_prop(a), "prop in the legal set");
        for (const match2::MatchAction& a : {match2::MatchAction{match2::RowClear{0}}, match2::MatchAction{match2::ColClear{0}},
                                            match2::MatchAction{match2::Bomb{{0, 0}}}, match2::MatchAction{match2::Hammer{{0, 0}}}}) {
            try {
                (void)match2::apply_action(s, a);
                v.expect(false, "prop accepted without inventory");
            } catch (const GameError& e) {
                v.expect(e.code() == ErrorCode::OutOfProp, "prop rejected with the wrong code");
            }
        }
        const auto log = harness::run_episode(level_gen::make_instance(Game::Match2, level, seed), pusher, bare);
        for (const auto& step : log.steps) {
            if (step.kind == "action") v.expect(step.action.value("type", "") == "eliminate", "prop used under NoProps");
            if (step.kind == "rejected") {
                ++rejected;
                v.expect(step.error == "OutOfProp", "unexpected rejection " + step.error);
            }
        }
        v.expect(harness::replay_verify(log).ok, "NoProps replay");
    }
    v.expect(rejected > 0, "no prop attempt was made");
    v.note = "full " + std::to_string(full_wins) + "/30 >= fog " + std::to_string(fog_wins) + "/30; " +
             std::to_string(rejected) + " prop attempts refused";
}

// ---------------------------------------------------------------------------
// 11
// ---------------------------------------------------------------------------

void report_columns(Verdict& v) {
    const std::vector<std::string> maze = {"Model", "Samp.", "Suc.Rate", "A.Score", "A.steps",
                                           "A.Explor.", "A.Gold", "Rem.HP", "A.kills", "A.Barr."};
    const std::vector<std::string> match2 = {"Model", "Sample", "Suc.Rate", "A.score",
                                             "R/M.S", "Score/Step", "Clear/Step", "API Eff."};
    v.expect(harness::table_columns(Game::Maze) == maze, "maze columns");
    v.expect(harness::table_columns(Game::Match2) == match2, "match-2 columns");

    const auto join = [](const std::vector<std::string>& cols) {
        std::string s;
        for (const auto& c : cols) s += (s.empty() ? "" : ",") + c;
        return s + "\n";
    };
    const auto maze_csv = harness::to_csv(harness::aggregate(fixture::maze_trio()), "easy");
    const auto m2_csv = harness::to_csv(harness::aggregate(fixture::match2_trio()), "medium");
    v.expect(maze_csv.rfind(join(maze), 0) == 0, "maze CSV header");
    v.expect(m2_csv.rfind(join(match2), 0) == 0, "match-2 CSV header");
    v.note = "column sets exact. Leaderboard and trend values need live LLM backends and are not reproducible here";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "match-2 scoring oracle", 1, match2_scoring},
        {2, "maze scoring oracle", 1, maze_scoring},
        {3, "group finding equals union-find oracle", 5, group_equivalence},
        {4, "gravity and refill invariants", 10, gravity_invariants},
        {5, "determinism and replay", 30, determinism},
        {6, "solvability and level intervals", 30, solvability},
        {7, "scripted agent sanity", 60, scripted_sanity},
        {8, "metrics fixture", 1, metrics_fixture},
        {9, "experience gates", 30, expver_gates},
        {10, "ablation direction", 60, ablation_direction},
        {11, "report column sets", 1, report_columns},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(v);
        } catch (const std::exception& e) {
            v.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) v.failures.push_back("took " + fmt2(secs) + "s");
        const bool ok = v.ok();
        failed += ok ? 0 : 1;
        std::printf("%s %2d %-40s %7.3fs / %gs  %s\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(), secs, c.limit_s,
                    v.note.c_str());
        for (const auto& f : v.failures) std::printf("       - %s\n", f.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
