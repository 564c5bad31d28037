#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class Level { Easy, Medium, Hard };
enum class Game { Maze, Match2 };

std::string_view to_string(Level level);
std::string_view to_string(Game game);
Level parse_level(std::string_view text);  // throws GameError(InvalidLevel)
inline int level_index(Level level) { return static_cast<int>(level); }
Game parse_game(std::string_view text);    // throws GameError(InvalidLevel)

struct Pos {
    int row = 0;
    int col = 0;
    auto operator<=>(const Pos&) const = default;
};

/// Machine-readable error categories shared by engines, gateway and services.
enum class ErrorCode {
    TerminalEpisode,
    MalformedAction,
    InvalidTarget,
    OutOfProp,
    OutOfRange,
    NotTerminal,
    InvalidConfig,
    GenerationExhausted,
    ParseFailure,
    BackendUnavailable,
    SummaryParseFailure,
    OrganizeParseFailure,
    MixedGames,
    SessionNotFound,
    SessionFinished,
    InvalidLevel,
};

std::string_view to_string(ErrorCode code);

class GameError : public std::runtime_error {
public:
    GameError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Seeded generator whose draws are identical on every platform.
///
/// std::uniform_int_distribution is implementation-defined, so bounded draws
/// are done here by rejection sampling on the raw 64-bit engine output. The
/// engine state round-trips through text, which lets game states be digested
/// and compared bit-for-bit.
class Rng {
public:
    Rng() : engine_(0) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    int below(int bound);

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) { return lo + below(hi - lo + 1); }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::string serialize() const;
    static Rng deserialize(const std::string& text);

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent streams from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// 64-bit FNV-1a over bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace arena
