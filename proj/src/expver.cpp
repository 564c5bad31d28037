#include "arena/expver.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace arena::expver {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

// Strips a leading list marker ("-", "*", "•", "3.", "3)"); nullopt when the
// line is not a list item.
std::optional<std::string> bullet_text(const std::string& line) {
    std::string t = trim(line);
    if (t.empty()) return std::nullopt;
    if (t.rfind("\xE2\x80\xA2", 0) == 0) return trim(t.substr(3));
    if (t[0] == '-' || t[0] == '*' || t[0] == '+') {
        if (t.size() > 1 && t[1] == '*') return std::nullopt;  // bold text, not a bullet
        return trim(t.substr(1));
    }
    std::size_t i = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i > 0 && i < t.size() && (t[i] == '.' || t[i] == ')')) return trim(t.substr(i + 1));
    return std::nullopt;
}

std::string format_value(const json& v) {
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::set<std::string> words(std::string_view text) {
    std::set<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.insert(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.insert(std::move(cur));
    return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& w : a) common += b.count(w);
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

void merge_into(std::vector<std::string>& dst, const std::vector<std::string>& src) {
    for (const auto& s : src)
        if (std::find(dst.begin(), dst.end(), s) == dst.end()) dst.push_back(s);
}

json truth_json(const Truth& t) {
    return json{{"text", t.text}, {"provenance", t.provenance}, {"verified", t.verified}, {"revision", t.revision}};
}

Truth truth_from(const json& j) {
    return {j.at("text").get<std::string>(), j.value("provenance", std::vector<std::string>{}),
            j.value("verified", false), j.value("revision", 0)};
}

json truths_json(const std::vector<Truth>& truths) {
    json arr = json::array();
    for (const auto& t : truths) arr.push_back(truth_json(t));
    return arr;
}

std::vector<Truth> truths_from(const json& j) {
    std::vector<Truth> out;
    for (const auto& t : j) out.push_back(truth_from(t));
    return out;
}

std::string file_stem(std::string id) {
    for (char& c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return id;
}

}  // namespace

// ---------------------------------------------------------------------------
// Highlights and summaries
// ---------------------------------------------------------------------------

std::vector<int> Highlights::indices() const {
    std::vector<int> out;
    for (const auto& s : steps) out.push_back(s.index);
    return out;
}

Highlights select_highlights(const harness::EpisodeLog& log, int k) {
    Highlights h;
    const int n = static_cast<int>(log.steps.size());
    if (n == 0 || k <= 0) return h;
    std::vector<int> chosen;
    auto take = [&](int i) {
        if (static_cast<int>(chosen.size()) < k && std::find(chosen.begin(), chosen.end(), i) == chosen.end())
            chosen.push_back(i);
    };
    take(0);
    take(n - 1);
    if (n >= 2) take(1);
    std::vector<int> rest;
    for (int i = 0; i < n; ++i) rest.push_back(i);
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
        return std::abs(log.steps[a].reward_delta) > std::abs(log.steps[b].reward_delta);
    });
    for (int i : rest) take(i);
    std::sort(chosen.begin(), chosen.end());

    for (int i : chosen) {
        const auto& s = log.steps[static_cast<std::size_t>(i)];
        HighlightStep step;
        step.index = i;
        step.reward_delta = s.reward_delta;
        if (s.exchange) step.reasoning = s.exchange->response;
        else if (!s.responses.empty()) step.reasoning = s.responses.back();
        if (i == n - 1 && n >= 2) step.label = "End";
        else if (i <= 1) step.label = "Beginning";
        else step.label = std::string("Score change: ") + (s.reward_delta >= 0 ? "+" : "") + std::to_string(s.reward_delta);
        h.steps.push_back(std::move(step));
    }
    return h;
}

std::vector<std::string> Experience::candidate_texts() const {
    std::vector<std::string> out;
    for (const auto& s : strengths) out.push_back("Strength: " + s);
    for (const auto& w : weaknesses) out.push_back("Weakness: " + w);
    return out;
}

json to_json(const Experience& e) {
    return json{{"strengths", e.strengths},
                {"weaknesses", e.weaknesses},
                {"source",
                 {{"game", to_string(e.source.game)},
                  {"level", to_string(e.source.level)},
                  {"seed", e.source.seed},
                  {"episode_id", e.source.episode_id}}},
                {"metrics", e.metrics}};
}

std::string summary_prompt(const harness::EpisodeLog& log, const Highlights& highlights) {
    std::string out =
        "# Game Session Analysis\n\n"
        "Please analyze the following game session and provide insights about the agent's performance.\n\n"
        "## Game Metrics:\n";
    out += "- game: " + std::string(to_string(log.header.game)) + "\n";
    out += "- level: " + std::string(to_string(log.header.level)) + "\n";
    out += "- status: " + log.terminal.status + "\n";
    if (log.terminal.metrics.is_object())
        for (const auto& [key, value] : log.terminal.metrics.items()) out += "- " + key + ": " + format_value(value) + "\n";
    out += "\n## Session Highlights:\n\n";
    for (const auto& s : highlights.steps) {
        std::string reasoning = s.reasoning;
        if (reasoning.size() > kReasoningExcerpt) reasoning = reasoning.substr(0, kReasoningExcerpt) + "...";
        out += "Step " + std::to_string(s.index + 1) + " (" + s.label + "):\n";
        out += "Agent's reasoning: " + reasoning + "\n\n";
    }
    out +=
        "## Analysis Tasks:\n\n"
        "1. List the strengths demonstrated in this session. Provide as many as you can identify.\n\n"
        "2. List the weaknesses or areas for improvement from this session. Provide as many as you can identify.\n\n"
        "Please format your response as follows:\n\n"
        "Strengths:\n- [Strength 1]\n- [Strength 2]\n- [Strength 3]\n...\n\n"
        "Weaknesses:\n- [Weakness 1]\n- [Weakness 2]\n- [Weakness 3]\n...\n";
    return out;
}

std::optional<ParsedSummary> parse_summary(std::string_view text) {
    ParsedSummary out;
    enum class Section { None, Strengths, Weaknesses } section = Section::None;
    bool saw_s = false;
    bool saw_w = false;
    for (const auto& line : lines_of(text)) {
        std::string head = trim(line);
        while (!head.empty() && (head.front() == '#' || head.front() == '*' || head.front() == '_')) head.erase(0, 1);
        while (!head.empty() && (head.back() == '*' || head.back() == '_')) head.pop_back();
        head = lower(trim(head));
        if (head == "strengths:" || head == "strengths") {
            section = Section::Strengths;
            saw_s = true;
            continue;
        }
        if (head == "weaknesses:" || head == "weaknesses") {
            section = Section::Weaknesses;
            saw_w = true;
            continue;
        }
        if (section == Section::None) continue;
        const auto item = bullet_text(line);
        if (!item || item->empty() || *item == "...") continue;
        (section == Section::Strengths ? out.strengths : out.weaknesses).push_back(*item);
    }
    if (!saw_s || !saw_w || (out.strengths.empty() && out.weaknesses.empty())) return std::nullopt;
    return out;
}

Experience summarize(const harness::EpisodeLog& log, gateway::ChatBackend& backend, int highlight_budget,
                     std::string experience_id) {
    if (log.terminal.metrics.is_null())
        throw GameError(ErrorCode::NotTerminal, "cannot summarize an unfinished or aborted episode");
    gateway::ChatRequest request{{{"user", summary_prompt(log, select_highlights(log, highlight_budget))}}};
    for (int attempt = 0; attempt <= kSummaryRetries; ++attempt) {
        const gateway::ChatResponse r = backend.complete(request);
        if (auto parsed = parse_summary(r.text)) {
            Experience e;
            e.strengths = std::move(parsed->strengths);
            e.weaknesses = std::move(parsed->weaknesses);
            e.source = {log.header.game, log.header.level, log.header.seed,
                        experience_id.empty() ? log.episode_id() : std::move(experience_id)};
            e.metrics = log.terminal.metrics;
            return e;
        }
        request.messages.push_back({"assistant", r.text});
        request.messages.push_back({"user", std::string(gateway::kFormatReminder)});
    }
    throw GameError(ErrorCode::SummaryParseFailure, "no Strengths:/Weaknesses: lists after " +
                                                       std::to_string(kSummaryRetries + 1) + " attempts");
}

// ---------------------------------------------------------------------------
// Repository
// ---------------------------------------------------------------------------

std::vector<std::string> TruthRepository::texts() const {
    std::vector<std::string> out;
    for (const auto& t : truths) out.push_back(t.text);
    return out;
}

void TruthRepository::begin_revision() {
    history.push_back({version, truths});
    ++version;
}

bool TruthRepository::rollback() {
    if (history.empty()) return false;
    version = history.back().version;
    truths = std::move(history.back().truths);
    history.pop_back();
    return true;
}

json to_json(const TruthRepository& repo) {
    json hist = json::array();
    for (const auto& h : repo.history) hist.push_back({{"version", h.version}, {"truths", truths_json(h.truths)}});
    return json{{"version", repo.version}, {"truths", truths_json(repo.truths)}, {"history", hist}};
}

TruthRepository truth_repository_from_json(const json& j) {
    TruthRepository repo;
    repo.version = j.value("version", 0);
    repo.truths = truths_from(j.value("truths", json::array()));
    for (const auto& h : j.value("history", json::array()))
        repo.history.push_back({h.at("version").get<int>(), truths_from(h.at("truths"))});
    return repo;
}

std::string serialize(const TruthRepository& repo) { return to_json(repo).dump(2) + "\n"; }

TruthRepository load_repository(const fs::path& path) {
    if (!fs::exists(path)) return {};
    std::ifstream in(path);
    try {
        return truth_repository_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw GameError(ErrorCode::InvalidConfig, "bad repository file " + path.string() + ": " + e.what());
    }
}

void save_repository(const fs::path& path, const TruthRepository& repo) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GameError(ErrorCode::InvalidConfig, "cannot write " + path.string());
    out << serialize(repo);
}

// ---------------------------------------------------------------------------
// Verification and maintenance
// ---------------------------------------------------------------------------

VerifiedOutcome verify(const Experience& experience, const level_gen::Instance& instance, const harness::Agent& agent,
                       const harness::PolicyContext& base, int baseline_score) {
    harness::PolicyContext ctx = base;
    for (auto& t : experience.candidate_texts()) ctx.knowledge.push_back(std::move(t));

    VerifiedOutcome out;
    out.baseline_score = baseline_score;
    out.replay_log = harness::run_episode(instance, agent, ctx);
    if (out.replay_log.terminal.aborted)
        throw GameError(ErrorCode::BackendUnavailable, "verification replay aborted: " + out.replay_log.terminal.reason);
    out.replay_metrics = out.replay_log.terminal.metrics;
    out.replay_success = out.replay_metrics.at("success").get<bool>();
    out.replay_score = out.replay_metrics.at("score").get<int>();
    out.promoted = out.replay_success && out.replay_score > baseline_score;
    if (out.promoted)
        for (auto& text : experience.candidate_texts())
            out.candidates.push_back({std::move(text), {experience.source.episode_id}, true, 0});
    return out;
}

std::string organize_prompt(const std::vector<Truth>& entries) {
    std::string out =
        "# Game Truth Knowledge Organization Task\n\n"
        "Please review and organize the following game truth knowledge entries. This is a progressive knowledge "
        "organization process to identify and remove duplicates while considering merging highly similar entries.\n\n"
        "## Current Knowledge Entries:\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::string sources;
        for (const auto& p : entries[i].provenance) sources += (sources.empty() ? "" : ", ") + p;
        out += std::to_string(i + 1) + ". " + entries[i].text + " (Source: " + (sources.empty() ? "unknown" : sources) +
               ")\n";
    }
    out +=
        "\n## Organization Requirements:\n"
        "1. Identify and remove completely duplicate knowledge entries\n"
        "2. For knowledge entries that are highly similar in meaning but different in expression, merge them into a "
        "more comprehensive entry\n"
        "3. When merging, preserve the specificity and core meaning of the original knowledge, don't lose key details\n"
        "4. Merged entries should be concise but not at the expense of important information\n"
        "5. If two knowledge points only have minimal similarities, keep them as separate entries\n"
        "6. Knowledge entries without clear similarities should remain unchanged\n\n"
        "## Please return the organized knowledge base in the following format:\n"
        "[Organized knowledge entry 1]\n"
        "[Organized knowledge entry 2] ...\n\n"
        "Note: This is a progressive knowledge organization process, you do not need to force a reduction in the "
        "number of entries. Only merge or remove entries when there is genuine high similarity or duplication.\n";
    return out;
}

std::vector<std::string> parse_organized(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& line : lines_of(text)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t == "...") continue;
        if (auto b = bullet_text(t)) t = *b;
        if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = trim(t.substr(1, t.size() - 2));
        if (const auto src = t.rfind("(Source:"); src != std::string::npos && t.back() == ')') t = trim(t.substr(0, src));
        if (t.empty()) continue;
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
    return out;
}

TruthRepository append_truths(const TruthRepository& repo, const std::vector<Truth>& incoming) {
    TruthRepository out = repo;
    out.begin_revision();
    for (Truth t : incoming) {
        t.verified = true;
        t.revision = out.version;
        out.truths.push_back(std::move(t));
    }
    return out;
}

MaintainOutcome maintain(const TruthRepository& repo, const std::vector<Truth>& incoming,
                         gateway::ChatBackend& organizer) {
    std::vector<Truth> all = repo.truths;
    all.insert(all.end(), incoming.begin(), incoming.end());

    const gateway::ChatResponse r = organizer.complete({{{"user", organize_prompt(all)}}});
    const std::vector<std::string> lines = parse_organized(r.text);

    MaintainOutcome out;
    if (lines.empty()) {
        out.repo = append_truths(repo, incoming);
        out.fallback = true;
        out.note = std::string(to_string(ErrorCode::OrganizeParseFailure)) + ": organizer returned no entries";
        return out;
    }
    if (lines.size() * 2 < all.size()) {
        out.repo = append_truths(repo, incoming);
        out.fallback = true;
        out.note = "organizer output shrank from " + std::to_string(all.size()) + " to " +
                   std::to_string(lines.size()) + " entries; appended instead";
        return out;
    }

    std::vector<std::set<std::string>> out_words;
    for (const auto& l : lines) out_words.push_back(words(l));
    auto best_match = [&](const std::set<std::string>& w, std::size_t count, auto&& words_at) {
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t j = 0; j < count; ++j) {
            const double s = jaccard(w, words_at(j));
            if (s > best_score) {
                best_score = s;
                best = j;
            }
        }
        return best;
    };

    std::vector<Truth> organized(lines.size());
    std::vector<bool> absorbed(lines.size(), false);
    for (const auto& input : all) {
        const std::size_t j =
            best_match(words(input.text), lines.size(), [&](std::size_t k) -> const auto& { return out_words[k]; });
        merge_into(organized[j].provenance, input.provenance);
        absorbed[j] = true;
    }
    std::vector<std::set<std::string>> in_words;
    for (const auto& t : all) in_words.push_back(words(t.text));
    out.repo = repo;
    out.repo.begin_revision();
    for (std::size_t j = 0; j < lines.size(); ++j) {
        Truth& t = organized[j];
        t.text = lines[j];
        t.verified = true;
        if (!absorbed[j]) {
            const std::size_t i =
                best_match(out_words[j], all.size(), [&](std::size_t k) -> const auto& { return in_words[k]; });
            t.provenance = all[i].provenance;
        }
        t.revision = out.repo.version;
        for (const auto& input : all)
            if (input.text == t.text && input.provenance == t.provenance) t.revision = input.revision;
    }
    out.repo.truths = std::move(organized);
    return out;
}

std::string compose_policy(const std::string& base_prompt, const TruthRepository& repo) {
    const auto texts = repo.texts();
    if (texts.empty()) return base_prompt;
    return base_prompt + "\n\n" + gateway::knowledge_section(texts);
}

// ---------------------------------------------------------------------------
// Delta gate and training
// ---------------------------------------------------------------------------

namespace {

std::vector<harness::EpisodeLog> run_tests(const std::vector<level_gen::Instance>& tests, const harness::Agent& agent,
                                           const harness::PolicyContext& base, const TruthRepository& repo,
                                           int workers) {
    harness::SuiteOptions options;
    options.context = base;
    options.context.knowledge = repo.texts();
    options.workers = workers;
    // Non-owning handle: the caller keeps the agent alive for the whole run.
    const std::shared_ptr<const harness::Agent> handle(std::shared_ptr<void>{}, &agent);
    harness::SuiteResult result = harness::run_suite(tests, {handle}, options);
    if (!result.aborted.empty())
        throw GameError(ErrorCode::BackendUnavailable, "test episode aborted: " + result.aborted.front());
    return std::move(result.logs);
}

std::vector<int> scores_of(const std::vector<harness::EpisodeLog>& logs) {
    std::vector<int> out;
    for (const auto& l : logs) out.push_back(l.terminal.metrics.at("score").get<int>());
    return out;
}

std::pair<double, double> test_stats(const std::vector<harness::EpisodeLog>& logs) {
    if (logs.empty()) return {0.0, 0.0};
    double wins = 0.0;
    double total = 0.0;
    for (const auto& l : logs) {
        wins += l.terminal.metrics.at("success").get<bool>() ? 1.0 : 0.0;
        total += l.terminal.metrics.at("score").get<double>();
    }
    const auto n = static_cast<double>(logs.size());
    return {100.0 * wins / n, total / n};
}

}  // namespace

DeltaResult evaluate_delta(const TruthRepository& prev, const TruthRepository& next,
                           const std::vector<level_gen::Instance>& tests, const harness::Agent& agent,
                           const harness::PolicyContext& base, int workers) {
    if (tests.empty()) throw GameError(ErrorCode::InvalidConfig, "delta evaluation needs at least one test instance");
    DeltaResult d;
    d.prev_logs = run_tests(tests, agent, base, prev, workers);
    d.new_logs = run_tests(tests, agent, base, next, workers);
    d.prev_scores = scores_of(d.prev_logs);
    d.new_scores = scores_of(d.new_logs);
    long long sum = 0;
    for (std::size_t i = 0; i < tests.size(); ++i) sum += d.new_scores[i] - d.prev_scores[i];
    d.delta = static_cast<double>(sum) / static_cast<double>(tests.size());
    d.accepted = sum >= 0;
    return d;
}

json to_json(const RoundReport& r) {
    json j{{"round", r.round},       {"suc_rate", r.suc_rate}, {"a_score", r.a_score},
           {"accepted", r.accepted}, {"repo_version", r.repo_version}, {"promoted", r.promoted},
           {"delta", r.delta},       {"instance", r.instance}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const TrainingReport& report) {
    json rows = json::array();
    for (const auto& r : report.rounds) rows.push_back(to_json(r));
    json j{{"rounds", rows}, {"aborted", report.aborted}, {"repo_version", report.repo.version}};
    if (report.aborted) j["abort_reason"] = report.abort_reason;
    return j;
}

TrainingReport training_loop(const std::vector<level_gen::Instance>& train, const std::vector<level_gen::Instance>& test,
                             const harness::Agent& agent, gateway::ChatBackend& analyst, TruthRepository repo,
                             const TrainingOptions& options) {
    TrainingReport report;
    report.repo = std::move(repo);
    if (options.rounds <= 0) return report;
    if (train.empty()) throw GameError(ErrorCode::InvalidConfig, "training needs at least one instance");
    if (!options.log_dir.empty()) fs::create_directories(options.log_dir);

    auto persist = [&](const std::string& id, const harness::EpisodeLog& log) {
        if (!options.log_dir.empty()) harness::write_log((options.log_dir / (file_stem(id) + ".jsonl")).string(), log);
    };

    std::size_t cursor = 0;
    std::optional<std::pair<double, double>> current;  // accepted repository on the test set
    auto current_stats = [&] {
        if (!current && !test.empty())
            current = test_stats(run_tests(test, agent, options.context, report.repo, options.workers));
        return current.value_or(std::pair{0.0, 0.0});
    };

    for (int round = 1; round <= options.rounds; ++round) {
        const level_gen::Instance& inst = train[cursor % train.size()];
        RoundReport row;
        row.round = round;
        row.instance = std::string(to_string(inst.game)) + ":" + std::string(to_string(inst.level)) + ":" +
                       std::to_string(inst.seed);
        try {
            harness::PolicyContext ctx = options.context;
            ctx.knowledge = report.repo.texts();
            const harness::EpisodeLog explore = harness::run_episode(inst, agent, ctx);
            if (explore.terminal.aborted)
                throw GameError(ErrorCode::BackendUnavailable, "explorer episode aborted: " + explore.terminal.reason);
            const std::string exp_id = "r" + std::to_string(round) + ":" + explore.episode_id();
            persist(exp_id, explore);

            std::optional<Experience> experience;
            try {
                experience = summarize(explore, analyst, options.highlight_budget, exp_id);
            } catch (const GameError& e) {
                if (e.code() != ErrorCode::SummaryParseFailure) throw;
                row.note = e.what();
            }
            bool gated = false;
            if (experience) {
                const VerifiedOutcome v = verify(*experience, inst, agent, ctx,
                                                 explore.terminal.metrics.at("score").get<int>());
                persist(exp_id + ":replay", v.replay_log);
                row.promoted = v.promoted;
                if (v.promoted) {
                    TruthRepository next;
                    if (options.no_truthweaver) {
                        next = append_truths(report.repo, v.candidates);
                    } else {
                        MaintainOutcome m = maintain(report.repo, v.candidates, analyst);
                        if (m.fallback) row.note = m.note;
                        next = std::move(m.repo);
                    }
                    const DeltaResult d = evaluate_delta(report.repo, next, test.empty() ? train : test, agent,
                                                         options.context, options.workers);
                    row.delta = d.delta;
                    row.accepted = d.accepted;
                    gated = true;
                    if (d.accepted) {
                        report.repo = std::move(next);
                        if (!test.empty()) current = test_stats(d.new_logs);
                        ++cursor;
                    } else {
                        next.rollback();
                        report.repo = std::move(next);
                        if (!test.empty()) current = test_stats(d.prev_logs);
                        row.note = "delta below zero; repository restored, round repeats on the same instance";
                    }
                } else if (row.note.empty()) {
                    row.note = "not promoted";
                }
            }
            if (!gated) ++cursor;
            std::tie(row.suc_rate, row.a_score) = current_stats();
            row.repo_version = report.repo.version;
        } catch (const GameError& e) {
            if (e.code() != ErrorCode::BackendUnavailable) throw;
            report.aborted = true;
            report.abort_reason = e.what();
            break;
        }
        report.rounds.push_back(std::move(row));
    }
    return report;
}

}  // namespace arena::expver
