#include "arena/match2.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace arena::match2 {

using nlohmann::json;

namespace {

constexpr Bits kNotLeftCol = 0xFEFEFEFEFEFEFEFEULL;   // clears col 0
constexpr Bits kNotRightCol = 0x7F7F7F7F7F7F7F7FULL;  // clears col 7

Bits neighbours(Bits b) {
    // bit index grows with col (+1) and row (+8)
    return ((b << 1) & kNotLeftCol) | ((b >> 1) & kNotRightCol) | (b << 8) | (b >> 8);
}

Bits flood(Bits seed, Bits domain) {
    Bits grown = seed & domain;
    for (;;) {
        const Bits next = (grown | neighbours(grown)) & domain;
        if (next == grown) return grown;
        grown = next;
    }
}

std::array<Bits, kColors> colour_planes(const Board& board) {
    std::array<Bits, kColors> planes{};
    for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c)
            if (const Color col = board[r][c]; col != Color::Empty)
                planes[static_cast<int>(col)] |= Bits{1} << bit_index({r, c});
    return planes;
}

bool in_range(Pos p) { return p.row >= 0 && p.row < kSize && p.col >= 0 && p.col < kSize; }

void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) throw GameError(code, what);
}

int& inventory_slot(Inventory& inv, const MatchAction& a) {
    if (std::holds_alternative<RowClear>(a)) return inv.row;
    if (std::holds_alternative<ColClear>(a)) return inv.col;
    if (std::holds_alternative<Bomb>(a)) return inv.bomb;
    return inv.hammer;
}

int prop_cost(const MatchAction& a) {
    if (std::holds_alternative<RowClear>(a)) return kCostRow;
    if (std::holds_alternative<ColClear>(a)) return kCostCol;
    if (std::holds_alternative<Bomb>(a)) return kCostBomb;
    return kCostHammer;
}

Bits clear_mask(const MatchAction& a) {
    if (const auto* row = std::get_if<RowClear>(&a)) return Bits{0xFF} << (row->index * kSize);
    if (const auto* col = std::get_if<ColClear>(&a)) return 0x0101010101010101ULL << col->index;
    if (const auto* bomb = std::get_if<Bomb>(&a)) {
        Bits m = 0;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc)
                if (const Pos q{bomb->pos.row + dr, bomb->pos.col + dc}; in_range(q)) m |= Bits{1} << bit_index(q);
        return m;
    }
    return Bits{1} << bit_index(std::get<Hammer>(a).pos);
}

void validate_range(const MatchAction& a) {
    std::visit(
        [](const auto& act) {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, RowClear> || std::is_same_v<T, ColClear>) {
                require(act.index >= 0 && act.index < kSize, ErrorCode::OutOfRange, "row/col index out of range");
            } else {
                require(in_range(act.pos), ErrorCode::OutOfRange, "position out of range");
            }
        },
        a);
}

}  // namespace

char glyph(Color c) {
    switch (c) {
        case Color::A: return 'A';
        case Color::B: return 'B';
        case Color::C: return 'C';
        case Color::D: return 'D';
        case Color::Empty: return '.';
    }
    return '.';
}

std::optional<Color> color_from_glyph(char c) {
    switch (c) {
        case 'A': return Color::A;
        case 'B': return Color::B;
        case 'C': return Color::C;
        case 'D': return Color::D;
        case '.': return Color::Empty;
        default: return std::nullopt;
    }
}

std::string board_to_text(const Board& board) {
    std::string out;
    for (const auto& row : board) {
        for (int c = 0; c < kSize; ++c) {
            if (c) out.push_back(' ');
            out.push_back(glyph(row[c]));
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<std::string> board_to_rows(const Board& board) {
    std::vector<std::string> rows;
    for (const auto& row : board) {
        std::string line;
        for (Color c : row) line.push_back(glyph(c));
        rows.push_back(std::move(line));
    }
    return rows;
}

Board board_from_rows(const std::vector<std::string>& rows) {
    require(rows.size() == static_cast<std::size_t>(kSize), ErrorCode::InvalidConfig, "board must have 8 rows");
    Board b{};
    for (int r = 0; r < kSize; ++r) {
        int c = 0;
        for (char ch : rows[r]) {
            if (ch == ' ') continue;
            const auto color = color_from_glyph(ch);
            require(color.has_value() && c < kSize, ErrorCode::InvalidConfig, "bad board row '" + rows[r] + "'");
            b[r][c++] = *color;
        }
        require(c == kSize, ErrorCode::InvalidConfig, "board rows must have 8 cells");
    }
    return b;
}

Bits component_at(const Board& board, Pos p) {
    if (!in_range(p) || board[p.row][p.col] == Color::Empty) return 0;
    const auto planes = colour_planes(board);
    return flood(Bits{1} << bit_index(p), planes[static_cast<int>(board[p.row][p.col])]);
}

std::vector<Group> find_groups(const Board& board) {
    const auto planes = colour_planes(board);
    std::vector<std::pair<int, Group>> found;
    for (int colour = 0; colour < kColors; ++colour) {
        Bits rest = planes[colour];
        while (rest) {
            const Bits seed = rest & (~rest + 1);
            const Bits comp = flood(seed, planes[colour]);
            rest &= ~comp;
            if (std::popcount(comp) < 2) continue;
            Group g;
            g.color = static_cast<Color>(colour);
            for (Bits m = comp; m; m &= m - 1) {
                const int idx = std::countr_zero(m);
                g.cells.push_back({idx / kSize, idx % kSize});
            }
            found.emplace_back(std::countr_zero(comp), std::move(g));
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Group> groups;
    groups.reserve(found.size());
    for (auto& [first, g] : found) groups.push_back(std::move(g));
    return groups;
}

int score_elimination(int n) {
    if (n < 2) throw std::invalid_argument("score_elimination: group size must be at least 2");
    return 5 * n + 3 * std::max(0, n - 2);
}

std::string_view to_string(Status status) {
    switch (status) {
        case Status::Running: return "running";
        case Status::Success: return "success";
        case Status::Failure: return "failure";
    }
    return "running";
}

Status parse_status(std::string_view text) {
    if (text == "success") return Status::Success;
    if (text == "failure") return Status::Failure;
    return Status::Running;
}

int MatchState::total_eliminated() const { return std::accumulate(eliminated.begin(), eliminated.end(), 0); }

json to_json(const MatchState& s) {
    return json{{"board", board_to_rows(s.board)},
                {"score", s.score},
                {"steps_remaining", s.steps_remaining},
                {"max_steps", s.max_steps},
                {"inventory", {{"row", s.inventory.row}, {"col", s.inventory.col}, {"bomb", s.inventory.bomb},
                               {"hammer", s.inventory.hammer}}},
                {"targets", s.targets},
                {"eliminated", s.eliminated},
                {"api_calls", s.api_calls},
                {"valid_calls", s.valid_calls},
                {"status", to_string(s.status)},
                {"rng", s.rng.serialize()}};
}

std::string digest(const MatchState& state) { return fnv1a_hex(to_json(state).dump()); }

json action_to_json(const MatchAction& action) {
    return std::visit(
        [](const auto& a) -> json {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Eliminate>) return {{"type", "eliminate"}, {"pos", {a.pos.row, a.pos.col}}};
            if constexpr (std::is_same_v<T, RowClear>) return {{"type", "row"}, {"index", a.index}};
            if constexpr (std::is_same_v<T, ColClear>) return {{"type", "col"}, {"index", a.index}};
            if constexpr (std::is_same_v<T, Bomb>) return {{"type", "bomb"}, {"pos", {a.pos.row, a.pos.col}}};
            if constexpr (std::is_same_v<T, Hammer>) return {{"type", "hammer"}, {"pos", {a.pos.row, a.pos.col}}};
        },
        action);
}

std::string format_action(const std::optional<MatchAction>& action) {
    json j;
    j["action"] = action ? action_to_json(*action) : json(nullptr);
    return j.dump();
}

bool is_prop(const MatchAction& action) { return !std::holds_alternative<Eliminate>(action); }

Board gravity_and_refill(const Board& board, Rng& rng) {
    Board out{};
    for (int c = 0; c < kSize; ++c) {
        int write = kSize - 1;
        for (int r = kSize - 1; r >= 0; --r)
            if (board[r][c] != Color::Empty) out[write--][c] = board[r][c];
        for (int r = 0; r <= write; ++r) out[r][c] = static_cast<Color>(rng.below(kColors));
    }
    return out;
}

MatchTransition apply_action(const MatchState& state, const MatchAction& action) {
    require(!state.terminal(), ErrorCode::TerminalEpisode, "match-2 episode already terminal");
    require(state.steps_remaining > 0, ErrorCode::TerminalEpisode, "no steps remaining");
    validate_range(action);

    MatchTransition t{state, {}};
    MatchState& s = t.state;
    MatchStepResult& r = t.result;

    Bits cleared = 0;
    if (const auto* el = std::get_if<Eliminate>(&action)) {
        require(s.board[el->pos.row][el->pos.col] != Color::Empty, ErrorCode::InvalidTarget, "cannot eliminate an empty cell");
        cleared = component_at(s.board, el->pos);
        const int n = std::popcount(cleared);
        require(n >= 2, ErrorCode::InvalidTarget, "eliminate needs a connected group of at least two tiles");
        r.score_delta = score_elimination(n);
    } else {
        int& slot = inventory_slot(s.inventory, action);
        require(slot > 0, ErrorCode::OutOfProp, "prop not in inventory");
        --slot;
        cleared = clear_mask(action);
        r.score_delta = -prop_cost(action);
    }

    for (Bits m = cleared; m; m &= m - 1) {
        const int idx = std::countr_zero(m);
        Color& cell = s.board[idx / kSize][idx % kSize];
        if (cell == Color::Empty) continue;
        ++r.cleared[static_cast<int>(cell)];
        ++r.cleared_total;
        cell = Color::Empty;
    }
    for (int c = 0; c < kColors; ++c) s.eliminated[c] += r.cleared[c];
    r.refilled = r.cleared_total;
    s.board = gravity_and_refill(s.board, s.rng);
    s.score += r.score_delta;
    --s.steps_remaining;

    bool met = true;
    for (int c = 0; c < kColors; ++c) met = met && s.eliminated[c] >= s.targets[c];
    if (met)
        s.status = Status::Success;
    else if (s.steps_remaining == 0)
        s.status = Status::Failure;
    r.terminal = s.status;
    return t;
}

void record_call(MatchState& state, bool valid) {
    ++state.api_calls;
    if (valid) ++state.valid_calls;
}

MatchState forfeit(const MatchState& state) {
    MatchState s = state;
    if (s.status == Status::Running) {
        s.steps_remaining = 0;
        s.status = Status::Failure;
    }
    return s;
}

std::vector<MatchAction> legal_actions(const MatchState& s) {
    std::vector<MatchAction> out;
    if (s.terminal() || s.steps_remaining <= 0) return out;
    for (const auto& g : find_groups(s.board))
        for (Pos p : g.cells) out.emplace_back(Eliminate{p});
    for (int i = 0; i < kSize; ++i) {
        if (s.inventory.row > 0) out.emplace_back(RowClear{i});
        if (s.inventory.col > 0) out.emplace_back(ColClear{i});
    }
    for (int r = 0; r < kSize; ++r)
        for (int c = 0; c < kSize; ++c) {
            if (s.inventory.bomb > 0) out.emplace_back(Bomb{{r, c}});
            if (s.inventory.hammer > 0) out.emplace_back(Hammer{{r, c}});
        }
    return out;
}

json to_json(const MatchMetrics& m) {
    return json{{"success", m.success},       {"score", m.score},
                {"steps_used", m.steps_used}, {"rms", m.rms},
                {"score_per_step", m.score_per_step}, {"clear_per_step", m.clear_per_step},
                {"api_eff", m.api_eff}};
}

MatchMetrics match_metrics_from_json(const json& j) {
    MatchMetrics m;
    m.success = j.at("success").get<bool>();
    m.score = j.at("score").get<int>();
    m.steps_used = j.at("steps_used").get<int>();
    m.rms = j.at("rms").get<double>();
    m.score_per_step = j.at("score_per_step").get<double>();
    m.clear_per_step = j.at("clear_per_step").get<double>();
    m.api_eff = j.at("api_eff").get<double>();
    return m;
}

MatchMetrics metrics_snapshot(const MatchState& s) {
    if (!s.terminal()) throw GameError(ErrorCode::NotTerminal, "match-2 episode still running");
    MatchMetrics m;
    m.success = s.status == Status::Success;
    m.score = s.score;
    m.steps_used = s.steps_used();
    m.rms = s.max_steps > 0 ? 100.0 * s.steps_remaining / s.max_steps : 0.0;
    if (m.steps_used > 0) {
        m.score_per_step = static_cast<double>(s.score) / m.steps_used;
        m.clear_per_step = static_cast<double>(s.total_eliminated()) / m.steps_used;
    }
    m.api_eff = s.api_calls > 0 ? 100.0 * s.valid_calls / s.api_calls : 0.0;
    return m;
}

}  // namespace arena::match2
