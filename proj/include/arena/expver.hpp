#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arena/agents.hpp"
#include "arena/episode.hpp"
#include "arena/gateway.hpp"
#include "arena/harness.hpp"

namespace arena::expver {

inline constexpr int kDefaultHighlightBudget = 6;
inline constexpr int kSummaryRetries = 2;
inline constexpr std::size_t kReasoningExcerpt = 600;

struct HighlightStep {
    int index = 0;  // zero-based step index
    std::string label;  // "Beginning", "End" or the score swing
    std::string reasoning;
    int reward_delta = 0;
};

struct Highlights {
    std::vector<HighlightStep> steps;  // strictly increasing index
    std::vector<int> indices() const;
};

/// First two steps, the last step, then the largest |reward_delta| steps
/// (earlier index on ties) until k steps are chosen.
Highlights select_highlights(const harness::EpisodeLog& log, int k = kDefaultHighlightBudget);

struct SourceRef {
    Game game = Game::Maze;
    Level level = Level::Easy;
    std::uint64_t seed = 0;
    std::string episode_id;
};

struct Experience {
    std::vector<std::string> strengths;
    std::vector<std::string> weaknesses;
    SourceRef source;
    nlohmann::json metrics;

    /// Bullets prefixed "Strength: " / "Weakness: ".
    std::vector<std::string> candidate_texts() const;
};

nlohmann::json to_json(const Experience& e);

std::string summary_prompt(const harness::EpisodeLog& log, const Highlights& highlights);

struct ParsedSummary {
    std::vector<std::string> strengths;
    std::vector<std::string> weaknesses;
};

/// Both headers must be present and at least one bullet found.
std::optional<ParsedSummary> parse_summary(std::string_view text);

/// Asks the backend for a strengths/weaknesses analysis of a finished episode.
/// Throws GameError(SummaryParseFailure) after the retries are used up.
Experience summarize(const harness::EpisodeLog& log, gateway::ChatBackend& backend,
                     int highlight_budget = kDefaultHighlightBudget, std::string experience_id = {});

// ---------------------------------------------------------------------------
// Truth repository
// ---------------------------------------------------------------------------

struct Truth {
    std::string text;
    std::vector<std::string> provenance;  // experience ids
    bool verified = false;
    int revision = 0;
    bool operator==(const Truth&) const = default;
};

struct RepositorySnapshot {
    int version = 0;
    std::vector<Truth> truths;
    bool operator==(const RepositorySnapshot&) const = default;
};

struct TruthRepository {
    std::vector<Truth> truths;
    int version = 0;
    std::vector<RepositorySnapshot> history;  // oldest first

    std::vector<std::string> texts() const;
    /// Pushes the current contents to history and bumps the version.
    void begin_revision();
    /// Restores the most recent history entry. Returns false when there is none.
    bool rollback();
};

nlohmann::json to_json(const TruthRepository& repo);
TruthRepository truth_repository_from_json(const nlohmann::json& j);
std::string serialize(const TruthRepository& repo);
TruthRepository load_repository(const std::filesystem::path& path);  // missing file = empty repository
void save_repository(const std::filesystem::path& path, const TruthRepository& repo);

struct VerifiedOutcome {
    bool promoted = false;
    bool replay_success = false;
    int baseline_score = 0;
    int replay_score = 0;
    nlohmann::json replay_metrics;
    harness::EpisodeLog replay_log;
    std::vector<Truth> candidates;  // empty unless promoted
};

/// Replays the instance with the experience appended to the policy knowledge.
/// Promoted iff the replay succeeds with a strictly higher score.
VerifiedOutcome verify(const Experience& experience, const level_gen::Instance& instance, const harness::Agent& agent,
                       const harness::PolicyContext& base, int baseline_score);

std::string organize_prompt(const std::vector<Truth>& entries);
/// One entry per non-empty line; numbering, bullets, brackets and source
/// suffixes are stripped.
std::vector<std::string> parse_organized(std::string_view text);

struct MaintainOutcome {
    TruthRepository repo;
    bool fallback = false;  // organizer output rejected, incoming appended verbatim
    std::string note;
};

/// Organizer pass over existing + incoming entries. Merged entries carry the
/// union of the provenance of the inputs they absorbed.
MaintainOutcome maintain(const TruthRepository& repo, const std::vector<Truth>& incoming,
                         gateway::ChatBackend& organizer);

/// Ablation without the organizer: incoming truths are appended as they are.
TruthRepository append_truths(const TruthRepository& repo, const std::vector<Truth>& incoming);

/// Base prompt followed by the knowledge section; identity for an empty repository.
std::string compose_policy(const std::string& base_prompt, const TruthRepository& repo);

struct DeltaResult {
    double delta = 0.0;
    bool accepted = true;
    std::vector<int> prev_scores;
    std::vector<int> new_scores;
    std::vector<harness::EpisodeLog> prev_logs;
    std::vector<harness::EpisodeLog> new_logs;
};

/// Mean paired score difference on the test instances. Throws
/// GameError(BackendUnavailable) if any test episode aborts.
DeltaResult evaluate_delta(const TruthRepository& prev, const TruthRepository& next,
                           const std::vector<level_gen::Instance>& tests, const harness::Agent& agent,
                           const harness::PolicyContext& base, int workers = 1);

struct TrainingOptions {
    int rounds = 0;
    bool no_truthweaver = false;
    int highlight_budget = kDefaultHighlightBudget;
    int workers = 1;
    harness::PolicyContext context;       // flags; its knowledge is replaced by the repository
    std::filesystem::path log_dir;        // explorer and replay logs; nothing written when empty
};

struct RoundReport {
    int round = 0;
    std::string instance;
    bool promoted = false;
    bool accepted = false;
    double delta = 0.0;
    double suc_rate = 0.0;  // accepted repository on the test instances
    double a_score = 0.0;
    int repo_version = 0;
    std::string note;
};

nlohmann::json to_json(const RoundReport& r);

struct TrainingReport {
    std::vector<RoundReport> rounds;
    TruthRepository repo;
    bool aborted = false;
    std::string abort_reason;
};

nlohmann::json to_json(const TrainingReport& report);

/// Explore, summarize, verify, maintain and gate, once per round. A round
/// rejected by the gate is repeated on the same training instance. Backend
/// exhaustion ends the loop and returns the last accepted repository.
TrainingReport training_loop(const std::vector<level_gen::Instance>& train, const std::vector<level_gen::Instance>& test,
                             const harness::Agent& agent, gateway::ChatBackend& analyst, TruthRepository repo,
                             const TrainingOptions& options);

}  // namespace arena::expver
