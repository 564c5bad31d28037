#include <regex>

#include "arena/gateway.hpp"

namespace arena::gateway {

using nlohmann::json;

std::optional<maze::MazeAction> parse_maze_action(std::string_view text) {
    static const std::regex kPattern(R"(Action\s*\**\s*:\s*\**\s*(\d+))", std::regex::icase);
    const std::string s(text);
    std::optional<std::string> last;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), kPattern); it != std::sregex_iterator(); ++it)
        last = (*it)[1].str();
    if (!last || last->size() > 2) return std::nullopt;
    const int id = std::stoi(*last);
    if (id < 0 || id > 11) return std::nullopt;
    return maze::MazeAction::from_id(id);
}

std::string format_maze_action(const maze::MazeAction& action) { return "Action: " + std::to_string(action.id()); }

namespace {

// Index one past the '}' matching the '{' at open, honouring JSON strings.
std::optional<std::size_t> matching_brace(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i + 1;
    }
    return std::nullopt;
}

std::optional<Pos> read_pos(const json& obj) {
    const auto it = obj.find("pos");
    if (it == obj.end() || !it->is_array() || it->size() != 2) return std::nullopt;
    if (!(*it)[0].is_number_integer() || !(*it)[1].is_number_integer()) return std::nullopt;
    const Pos p{(*it)[0].get<int>(), (*it)[1].get<int>()};
    if (p.row < 0 || p.row >= match2::kSize || p.col < 0 || p.col >= match2::kSize) return std::nullopt;
    return p;
}

std::optional<int> read_index(const json& obj) {
    const auto it = obj.find("index");
    if (it == obj.end() || !it->is_number_integer()) return std::nullopt;
    const int k = it->get<int>();
    if (k < 0 || k >= match2::kSize) return std::nullopt;
    return k;
}

Match2Parse map_action(const json& action) {
    if (action.is_null()) return NoAction{};
    if (!action.is_object() || !action.contains("type") || !action["type"].is_string())
        return ParseFailure{"action object lacks a string \"type\""};
    const std::string type = action["type"].get<std::string>();
    if (type == "eliminate" || type == "bomb" || type == "hammer") {
        const auto pos = read_pos(action);
        if (!pos) return ParseFailure{type + " needs \"pos\": [i, j] with 0 <= i, j < 8"};
        if (type == "eliminate") return match2::MatchAction{match2::Eliminate{*pos}};
        if (type == "bomb") return match2::MatchAction{match2::Bomb{*pos}};
        return match2::MatchAction{match2::Hammer{*pos}};
    }
    if (type == "row" || type == "col") {
        const auto index = read_index(action);
        if (!index) return ParseFailure{type + " needs \"index\": k with 0 <= k < 8"};
        if (type == "row") return match2::MatchAction{match2::RowClear{*index}};
        return match2::MatchAction{match2::ColClear{*index}};
    }
    return ParseFailure{"unknown action type '" + type + "'"};
}

}  // namespace

Match2Parse parse_match2_action(std::string_view text) {
    for (std::size_t open = text.rfind('{'); open != std::string_view::npos;
         open = open == 0 ? std::string_view::npos : text.rfind('{', open - 1)) {
        const auto end = matching_brace(text, open);
        if (!end) continue;
        const json obj = json::parse(text.substr(open, *end - open), nullptr, /*allow_exceptions=*/false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("action")) continue;
        return map_action(obj["action"]);
    }
    return ParseFailure{"no JSON object with an \"action\" key"};
}

}  // namespace arena::gateway
