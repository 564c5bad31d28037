#include <doctest.h>

#include "arena/match2.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace arena;
using namespace arena::match2;

namespace {

std::set<std::set<std::pair<int, int>>> engine_groups(const Board& b) {
    std::set<std::set<std::pair<int, int>>> out;
    for (const auto& g : find_groups(b)) {
        std::set<std::pair<int, int>> cells;
        for (Pos p : g.cells) cells.insert({p.row, p.col});
        out.insert(cells);
    }
    return out;
}

Board random_board(Rng& rng) {
    Board b{};
    for (auto& row : b)
        for (auto& c : row) c = static_cast<Color>(rng.below(kColors));
    return b;
}

int count(const Board& b, Color color) {
    int n = 0;
    for (const auto& row : b)
        for (Color c : row) n += c == color ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("elimination scoring") {
    CHECK(score_elimination(2) == 10);
    CHECK(score_elimination(3) == 18);
    CHECK(score_elimination(5) == 34);
    for (int n = 2; n <= 64; ++n) CHECK(score_elimination(n) == oracle::literal_elimination_score(n));
    CHECK_THROWS(score_elimination(1));
}

TEST_CASE("groups on degenerate boards") {
    Board uniform{};
    for (auto& row : uniform) row.fill(Color::A);
    const auto g = find_groups(uniform);
    REQUIRE(g.size() == 1);
    CHECK(g[0].cells.size() == 64);

    Board checker{};
    for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c) checker[r][c] = (r + c) % 2 ? Color::A : Color::B;
    CHECK(find_groups(checker).empty());
    CHECK(std::popcount(component_at(checker, {3, 3})) == 1);
}

TEST_CASE("groups agree with the union-find oracle on random boards") {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const Board b = random_board(rng);
        REQUIRE(engine_groups(b) == oracle::brute_force_groups(b));
    }
}

TEST_CASE("worked example: printed board has a singleton at (4,3)") {
    const MatchState s = fixture::worked_state();
    CHECK(std::popcount(component_at(s.board, {4, 3})) == 1);
    try {
        (void)apply_action(s, Eliminate{{4, 3}});
        FAIL("expected InvalidTarget");
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::InvalidTarget);
    }
}

TEST_CASE("worked example: a three-tile B group scores 18") {
    MatchState s = fixture::worked_state();
    // Extend (4,3) to the right and cut the link upward so the group is exactly three.
    s.board[4][4] = Color::B;
    s.board[4][5] = Color::B;
    s.board[3][4] = Color::D;
    s.board[3][5] = Color::C;
    REQUIRE(std::popcount(component_at(s.board, {4, 3})) == 3);
    const auto t = apply_action(s, Eliminate{{4, 3}});
    CHECK(t.result.score_delta == 18);
    CHECK(t.state.score == 18);
    CHECK(t.state.eliminated[static_cast<int>(Color::B)] == 3);
    CHECK(t.state.steps_remaining == 14);
    CHECK(t.result.refilled == 3);
}

TEST_CASE("a corner bomb clears the clipped 3x3 window") {
    MatchState s = fixture::worked_state();
    const Board before = s.board;
    const auto t = apply_action(s, Bomb{{0, 0}});
    CHECK(t.result.score_delta == -kCostBomb);
    CHECK(t.result.cleared_total == 4);
    std::array<int, kColors> census{};
    for (Pos p : {Pos{0, 0}, Pos{0, 1}, Pos{1, 0}, Pos{1, 1}}) ++census[static_cast<int>(before[p.row][p.col])];
    CHECK(t.result.cleared == census);
    CHECK(t.state.inventory.bomb == 1);
    CHECK(t.state.eliminated == census);
}

TEST_CASE("row and column clears") {
    MatchState s = fixture::worked_state();
    s.inventory = {1, 1, 0, 0};
    auto t = apply_action(s, RowClear{7});
    CHECK(t.result.cleared_total == 8);
    CHECK(t.result.score_delta == -kCostRow);
    // rows 0..6 fell one place
    for (int r = 0; r < 7; ++r) CHECK(t.state.board[r + 1] == s.board[r]);
    CHECK_THROWS_AS(apply_action(t.state, RowClear{0}), GameError);
    t = apply_action(t.state, ColClear{2});
    CHECK(t.result.cleared_total == 8);
    CHECK(t.state.inventory == Inventory{0, 0, 0, 0});
}

TEST_CASE("hammer on a lone tile refills the whole column") {
    MatchState s = fixture::worked_state();
    for (int r = 0; r < 7; ++r) s.board[r][0] = Color::Empty;
    const auto t = apply_action(s, Hammer{{7, 0}});
    CHECK(t.result.cleared_total == 1);
    CHECK(t.result.score_delta == -kCostHammer);
    for (int r = 0; r < kSize; ++r) CHECK(t.state.board[r][0] != Color::Empty);
}

TEST_CASE("gravity keeps column order and tops up with draws") {
    Board b{};
    for (auto& row : b) row.fill(Color::D);
    const std::array<Color, kSize> col = {Color::C, Color::C, Color::C, Color::C, Color::C, Color::A, Color::Empty, Color::B};
    for (int r = 0; r < kSize; ++r) b[r][0] = col[r];
    Rng rng(1);
    const Board out = gravity_and_refill(b, rng);
    CHECK(out[7][0] == Color::B);
    CHECK(out[6][0] == Color::A);
    for (int r = 1; r <= 5; ++r) CHECK(out[r][0] == Color::C);
    CHECK(out[0][0] != Color::Empty);
    for (int c = 1; c < kSize; ++c)
        for (int r = 0; r < kSize; ++r) CHECK(out[r][c] == Color::D);
}

TEST_CASE("rejected actions leave the state untouched") {
    const MatchState s = fixture::worked_state();
    const std::string d = digest(s);
    CHECK_THROWS_AS(apply_action(s, RowClear{0}), GameError);  // row = 0 in inventory
    CHECK_THROWS_AS(apply_action(s, Eliminate{{8, 0}}), GameError);
    CHECK_THROWS_AS(apply_action(s, ColClear{-1}), GameError);
    CHECK(digest(s) == d);
    try {
        (void)apply_action(s, Hammer{{0, 9}});
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
    try {
        (void)apply_action(s, RowClear{1});
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::OutOfProp);
    }
    const MatchState done = forfeit(s);
    CHECK(done.status == Status::Failure);
    CHECK(done.steps_remaining == 0);
    try {
        (void)apply_action(done, Eliminate{{0, 1}});
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::TerminalEpisode);
    }
}

TEST_CASE("random play keeps the board full and conserves tiles") {
    Rng pick(77);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        MatchState s;
        s.rng = Rng(seed);
        s.board = random_board(s.rng);
        s.max_steps = s.steps_remaining = 40;
        s.inventory = {2, 2, 2, 2};
        s.targets = {999, 999, 999, 999};
        while (!s.terminal()) {
            const auto legal = legal_actions(s);
            REQUIRE(!legal.empty());
            const auto t = apply_action(s, legal[pick.below(static_cast<int>(legal.size()))]);
            int cleared = 0;
            for (int c = 0; c < kColors; ++c) {
                cleared += t.result.cleared[c];
                CHECK(t.state.eliminated[c] - s.eliminated[c] == t.result.cleared[c]);
            }
            CHECK(cleared == t.result.refilled);
            CHECK(count(t.state.board, Color::Empty) == 0);
            s = t.state;
        }
    }
}

TEST_CASE("legal actions under an empty inventory contain no props") {
    MatchState s = fixture::worked_state();
    s.inventory = {};
    for (const auto& a : legal_actions(s)) CHECK_FALSE(is_prop(a));
    CHECK_THROWS_AS(apply_action(s, Bomb{{2, 2}}), GameError);
}

TEST_CASE("success when every target is met, failure when steps run out") {
    MatchState s = fixture::worked_state();
    s.targets = {0, 0, 0, 1};
    s.inventory = {0, 0, 0, 1};
    auto t = apply_action(s, Hammer{{0, 1}});  // a D
    CHECK(t.state.status == Status::Success);

    s = fixture::worked_state();
    s.steps_remaining = 1;
    t = apply_action(s, Eliminate{{1, 0}});
    CHECK(t.state.status == Status::Failure);
}

TEST_CASE("episode metrics") {
    MatchState s = fixture::worked_state();
    s.max_steps = 15;
    s.steps_remaining = 4;
    s.score = 220;
    s.eliminated = {20, 10, 14, 10};
    s.api_calls = 10;
    s.valid_calls = 7;
    CHECK_THROWS_AS(metrics_snapshot(s), GameError);
    s.status = Status::Success;
    const auto m = metrics_snapshot(s);
    CHECK(m.steps_used == 11);
    CHECK(m.clear_per_step == doctest::Approx(54.0 / 11));
    CHECK(m.score_per_step == doctest::Approx(20.0));
    CHECK(m.rms == doctest::Approx(100.0 * 4 / 15));
    CHECK(m.api_eff == doctest::Approx(70.0));

    // a forfeit spends the whole budget
    const auto f = metrics_snapshot(forfeit(fixture::worked_state()));
    CHECK(f.steps_used == 15);
    CHECK(f.score_per_step == 0.0);

    MatchState quiet = fixture::worked_state();
    quiet.status = Status::Failure;
    const auto q = metrics_snapshot(quiet);
    CHECK(q.steps_used == 0);
    CHECK(q.score_per_step == 0.0);
    CHECK(q.clear_per_step == 0.0);
    CHECK(q.api_eff == 0.0);
}

TEST_CASE("action wire format") {
    CHECK(format_action(MatchAction{Eliminate{{4, 3}}}) == R"({"action":{"pos":[4,3],"type":"eliminate"}})");
    CHECK(format_action(std::nullopt) == R"({"action":null})");
    CHECK(action_to_json(RowClear{2}) == nlohmann::json{{"type", "row"}, {"index", 2}});
}
