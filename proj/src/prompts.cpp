#include <sstream>

#include "arena/gateway.hpp"

namespace arena::gateway {

namespace {

constexpr std::string_view kMazeIntro = R"(You are an intelligent agent solving a maze problem. Your task is to navigate through the maze efficiently while collecting rewards and avoiding dangers.

Core Game Elements:
- A: Your current position
- G: Goal (always visible)
- C: Coin (+500 points)
- #: Wall (costs life if hit)
- ?: Unexplored area
- .: Empty space

Your Priorities (in order):
1. Stay alive (avoid walls/monsters)
2. Reach the goal
3. Collect coins when safe
4. Explore efficiently
5. Minimize steps

You will receive the current game state and must choose an action (0-11) based on careful analysis of the situation.
Always explain your reasoning before making a decision.
)";

constexpr std::string_view kLevel1 = R"(Level 1 Characteristics:
- 9x9 grid size
- No monsters
- 5 coins to collect
- Focus on basic navigation and coin collection
)";

constexpr std::string_view kLevel2 = R"(Level 2 Characteristics:
- 9x9 grid size
- Contains monsters (M) that move randomly
- 5 coins to collect
- Requires careful planning to avoid monsters
)";

constexpr std::string_view kLevel3 = R"(Level 3 Characteristics:
- 9x9 grid size
- Contains monsters and special items
- Items available:
  * T: Shovel (break walls, 3 uses)
  * W: Sword (defeat monsters)
  * N: Magnet (attract nearby coins)
  * K: Key (required for goal)
- Most complex navigation
)";

constexpr std::string_view kMovement = R"(Movement System:
- Actions 0-2: Move UP (row-1) [1/2/3 steps]
- Actions 3-5: Move DOWN (row+1) [1/2/3 steps]
- Actions 6-8: Move LEFT (col-1) [1/2/3 steps]
- Actions 9-11: Move RIGHT (col+1) [1/2/3 steps]

Available Actions:
- 0: Move UP 1 step
- 1: Move UP 2 steps
- 2: Move UP 3 steps
- 3: Move DOWN 1 step
- 4: Move DOWN 2 steps
- 5: Move DOWN 3 steps
- 6: Move LEFT 1 step
- 7: Move LEFT 2 steps
- 8: Move LEFT 3 steps
- 9: Move RIGHT 1 step
- 10: Move RIGHT 2 steps
- 11: Move RIGHT 3 steps
)";

constexpr std::string_view kScoring = R"(Scoring System:
- New cell explored: +10 points
- Coin collected: +500 points
- Step taken: -50 points
- Life lost: -1000 points
- Goal reached: +2000 points
)";

constexpr std::string_view kAnalyze = R"(Please analyze the current situation and choose your next action:
1. Analyze visible area and potential risks
2. Consider exploration value and rewards
3. Choose action number (0-11)
)";

constexpr std::string_view kMonsterRule = "- You cannot touch monsters (M), or you'll lose a life and return to start\n";

constexpr std::string_view kLevel3Rules = R"(Special rules for Level 3:
- You must collect the key (K) before you can enter the goal
- With a shovel (T), you can break through walls without losing lives (3 uses)
- With a sword (W), you can defeat monsters without losing lives
- With a magnet (N), you can collect coins in a 5x5 area around you
)";

constexpr std::string_view kResponseFormat = R"(The ultimate goal is to explore the map, collect coins, reach the goal, while maintaining a high score

Response format:
1. First analyze the current situation, including explored areas, coin positions, and potential risks
2. Consider possible movement options and their consequences, especially focusing on exploration value
3. Finally, provide your choice using the format "Action: X" where X is a number between 0-11

For example:
After analysis, you should write "Action: 9" to indicate moving right by 1 step
)";

constexpr std::string_view kMatchIntro =
    "You are an AI assistant for an 8x8 match game (gridSize = 8). The board is an 8x8 grid with colors A, B, C, D, "
    "or null (empty). Rules:\n"
    "- Eliminate ≥2 connected same-color tiles (horizontal/vertical), score = tiles * 5 + 3 * max(0, tiles - 2).\n";

constexpr std::string_view kMatchProps =
    "- Props (each usable once): row (clear row, 32 points), col (clear column, 32 points), bomb (clear 3x3 area, 12 "
    "points), hammer (clear 1 tile, 4 points).\n";

constexpr std::string_view kMatchRules =
    "- Each action costs 1 step. Goal: Clear the level by meeting color elimination targets (A, B, C, D) within "
    "limited steps while maximizing score and minimizing steps used.\n"
    "- Primary objective: Ensure level completion by achieving all color targets.\n";

constexpr std::string_view kMatchSecondary =
    "- Secondary objectives: Maximize total score by prioritizing larger tile eliminations and efficient prop usage; "
    "minimize steps to preserve remaining steps.\n";

constexpr std::string_view kMatchSecondaryNoProps =
    "- Secondary objectives: Maximize total score by prioritizing larger tile eliminations; minimize steps to "
    "preserve remaining steps.\n";

constexpr std::string_view kMatchRefill =
    "- After elimination, new random tiles (A, B, C, D) fall from the top to fill empty spaces.\n";

constexpr std::string_view kMatchIO =
    "- Input: Board (8x8, A/B/C/D/null), score, steps remaining, inventory (row/col/bomb/hammer), color targets, "
    "current color counts.\n"
    "- Output: Best action in JSON: {\"action\": {\"type\": \"eliminate\"|\"row\"|\"col\"|\"bomb\"|\"hammer\", "
    "\"pos\": [i,j] (for eliminate/bomb/hammer, 0≤i,j<8), \"index\": k (for row/col, 0≤k<8)}}.\n";

constexpr std::string_view kMatchIONoProps =
    "- Input: Board (8x8, A/B/C/D/null), score, steps remaining, inventory (row/col/bomb/hammer), color targets, "
    "current color counts.\n"
    "- Output: Best action in JSON: {\"action\": {\"type\": \"eliminate\", \"pos\": [i,j] (0≤i,j<8)}}.\n";

constexpr std::string_view kMatchNull = "- If no valid action, return {\"action\": null}.\n";

}  // namespace

std::string knowledge_section(std::span<const std::string> knowledge) {
    if (knowledge.empty()) return {};
    std::string out(kKnowledgeHeader);
    out.push_back('\n');
    for (std::size_t i = 0; i < knowledge.size(); ++i)
        out += std::to_string(i + 1) + ". " + knowledge[i] + "\n";
    return out;
}

std::string maze_system_prompt(Level level) {
    std::string out(kMazeIntro);
    out.push_back('\n');
    switch (level) {
        case Level::Easy: out += kLevel1; break;
        case Level::Medium: out += kLevel2; break;
        case Level::Hard: out += kLevel3; break;
    }
    return out;
}

Prompt build_maze_prompt(const maze::MazeState& s, std::span<const std::string> knowledge, PromptFlags flags) {
    std::ostringstream u;
    if (const auto section = knowledge_section(knowledge); !section.empty()) u << section << '\n';
    u << "Current Game State:\n" << maze::observe(s, flags.full_vision) << '\n';
    u << "Game Status:\n"
      << "- Score: " << s.score << '\n'
      << "- Lives: " << s.lives << '\n'
      << "- Current Position (row,col): (" << s.agent.row << ',' << s.agent.col << ")\n\n";
    u << kMovement << '\n';
    if (s.level == Level::Hard) {
        u << "Current items status:\n";
        if (s.pickaxe_uses > 0)
            u << "- Shovel: Equipped (Uses remaining: " << s.pickaxe_uses << ")\n";
        else
            u << "- Shovel: Not equipped\n";
        u << "- Sword: " << (s.has_sword ? "Equipped" : "Not equipped") << '\n';
        u << "- Magnet: " << (s.has_magnet ? "Equipped" : "Not equipped") << '\n';
        u << "- Key: " << (s.has_key ? "Collected" : "Not collected (required to finish)") << "\n\n";
    }
    u << kScoring << '\n' << kAnalyze;
    if (s.level != Level::Easy) u << '\n' << kMonsterRule;
    if (s.level == Level::Hard) u << '\n' << kLevel3Rules;
    u << '\n' << kResponseFormat;
    return {maze_system_prompt(s.level), u.str()};
}

std::string match2_system_prompt(bool no_props) {
    std::string out(kMatchIntro);
    if (!no_props) out += kMatchProps;
    out += kMatchRules;
    out += no_props ? kMatchSecondaryNoProps : kMatchSecondary;
    out += kMatchRefill;
    out += no_props ? kMatchIONoProps : kMatchIO;
    out += kMatchNull;
    return out;
}

std::string match2_state_block(const match2::MatchState& s) {
    std::ostringstream u;
    u << match2::board_to_text(s.board);
    u << "Score: " << s.score << ", Steps remaining: " << s.steps_remaining << '\n';
    u << "Inventory: row=" << s.inventory.row << ", col=" << s.inventory.col << ", bomb=" << s.inventory.bomb
      << ", hammer=" << s.inventory.hammer << '\n';
    static constexpr std::array<char, 4> kNames = {'A', 'B', 'C', 'D'};
    u << "Color targets: ";
    for (int c = 0; c < match2::kColors; ++c) u << (c ? ", " : "") << kNames[c] << ':' << s.targets[c];
    u << "\nCurrent counts: ";
    for (int c = 0; c < match2::kColors; ++c) u << (c ? ", " : "") << kNames[c] << ':' << s.eliminated[c];
    u << '\n';
    return u.str();
}

Prompt build_match2_prompt(const match2::MatchState& s, std::span<const std::string> knowledge, PromptFlags flags) {
    std::string user;
    if (const auto section = knowledge_section(knowledge); !section.empty()) user = section + "\n";
    user += match2_state_block(s);
    return {match2_system_prompt(flags.no_props), user};
}

}  // namespace arena::gateway
