#include "arena/common.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

namespace arena {

std::string_view to_string(Level level) {
    switch (level) {
        case Level::Easy: return "easy";
        case Level::Medium: return "medium";
        case Level::Hard: return "hard";
    }
    return "easy";
}

std::string_view to_string(Game game) {
    return game == Game::Maze ? "maze" : "match2";
}

Level parse_level(std::string_view text) {
    if (text == "easy" || text == "Easy" || text == "1") return Level::Easy;
    if (text == "medium" || text == "Medium" || text == "2") return Level::Medium;
    if (text == "hard" || text == "Hard" || text == "3") return Level::Hard;
    throw GameError(ErrorCode::InvalidLevel, "unknown level '" + std::string(text) + "'");
}

Game parse_game(std::string_view text) {
    if (text == "maze") return Game::Maze;
    if (text == "match2" || text == "match-2") return Game::Match2;
    throw GameError(ErrorCode::InvalidLevel, "unknown game '" + std::string(text) + "'");
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::TerminalEpisode: return "TerminalEpisode";
        case ErrorCode::MalformedAction: return "MalformedAction";
        case ErrorCode::InvalidTarget: return "InvalidTarget";
        case ErrorCode::OutOfProp: return "OutOfProp";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NotTerminal: return "NotTerminal";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::GenerationExhausted: return "GenerationExhausted";
        case ErrorCode::ParseFailure: return "ParseFailure";
        case ErrorCode::BackendUnavailable: return "BackendUnavailable";
        case ErrorCode::SummaryParseFailure: return "SummaryParseFailure";
        case ErrorCode::OrganizeParseFailure: return "OrganizeParseFailure";
        case ErrorCode::MixedGames: return "MixedGames";
        case ErrorCode::SessionNotFound: return "SessionNotFound";
        case ErrorCode::SessionFinished: return "SessionFinished";
        case ErrorCode::InvalidLevel: return "InvalidLevel";
    }
    return "Unknown";
}

int Rng::below(int bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const auto range = static_cast<std::uint64_t>(bound);
    // Largest multiple of range that fits; draws above it are rejected.
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw = 0;
    do {
        draw = engine_();
    } while (draw >= limit);
    return static_cast<int>(draw % range);
}

std::string Rng::serialize() const {
    std::ostringstream out;
    out << engine_;
    return out.str();
}

Rng Rng::deserialize(const std::string& text) {
    Rng rng;
    std::istringstream in(text);
    in >> rng.engine_;
    if (!in) throw std::invalid_argument("Rng::deserialize: malformed state");
    return rng;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace arena
