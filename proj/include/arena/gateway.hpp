#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "arena/maze.hpp"
#include "arena/match2.hpp"

namespace arena::gateway {

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

struct Prompt {
    std::string system;
    std::string user;
};

struct PromptFlags {
    bool full_vision = false;  // maze
    bool no_props = false;     // match-2
};

inline constexpr std::string_view kKnowledgeHeader =
    "Training Knowledge (use these insights to make better decisions):";
inline constexpr std::string_view kFormatReminder = "Respond in the required format.";

/// Header plus "1. ..." lines; empty string when there is no knowledge.
std::string knowledge_section(std::span<const std::string> knowledge);

std::string maze_system_prompt(Level level);
Prompt build_maze_prompt(const maze::MazeState& state, std::span<const std::string> knowledge, PromptFlags flags);

std::string match2_system_prompt(bool no_props);
/// Board, score, steps, inventory, targets and cumulative counts block.
std::string match2_state_block(const match2::MatchState& state);
Prompt build_match2_prompt(const match2::MatchState& state, std::span<const std::string> knowledge, PromptFlags flags);

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

struct ParseFailure {
    std::string reason;
};

struct NoAction {};

/// Last "Action: <n>" occurrence with n in 0..11 (markdown emphasis tolerated).
std::optional<maze::MazeAction> parse_maze_action(std::string_view text);
std::string format_maze_action(const maze::MazeAction& action);

using Match2Parse = std::variant<match2::MatchAction, NoAction, ParseFailure>;

/// Last JSON object in the text that carries an "action" key.
Match2Parse parse_match2_action(std::string_view text);

// ---------------------------------------------------------------------------
// Chat-completion backends
// ---------------------------------------------------------------------------

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
};

struct AttemptRecord {
    int status = 0;  // 0 = transport error
    std::string error;
    double latency_ms = 0.0;
};

struct ChatResponse {
    std::string text;
    int attempts = 1;
    double latency_ms = 0.0;
    std::vector<AttemptRecord> attempt_log;
};

/// One prompt/response pair as recorded in episode logs.
struct ChatExchange {
    std::string system;
    std::string user;
    std::string response;
    double latency_ms = 0.0;
    int attempts = 1;
};

nlohmann::json to_json(const ChatExchange& exchange);
ChatExchange chat_exchange_from_json(const nlohmann::json& j);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    /// Throws GameError(BackendUnavailable) when the backend cannot answer.
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct BackendConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4.1";
    std::string api_key_env = "OPENAI_API_KEY";
    double temperature = 0.0;
    int max_retries = 3;
    double timeout_seconds = 60.0;
    int backoff_initial_ms = 500;
    double backoff_factor = 2.0;
    int backoff_max_ms = 8000;
};

BackendConfig backend_config_from_json(const nlohmann::json& j);  // throws GameError(InvalidConfig)
nlohmann::json to_json(const BackendConfig& config);
BackendConfig load_backend_config(const std::string& path);

struct HttpResult {
    int status = 0;  // 0 when the request never produced a response
    std::string body;
    std::string error;
};

using Headers = std::vector<std::pair<std::string, std::string>>;
using Transport =
    std::function<HttpResult(const std::string& url, const std::string& body, const Headers& headers, double timeout_s)>;

/// cpp-httplib POST; supports http:// and (when built with OpenSSL) https://.
Transport http_transport();

/// {"model", "messages": [{"role", "content"}...], "temperature"}
std::string build_request_body(const BackendConfig& config, const ChatRequest& request);
/// choices[0].message.content; throws GameError(ParseFailure).
std::string extract_content(const std::string& body);

/// Chat-completions client with exponential backoff on transport errors,
/// HTTP 429 and 5xx. Other 4xx responses fail immediately.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(BackendConfig config, Transport transport = http_transport());
    ChatResponse complete(const ChatRequest& request) override;
    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
    Transport transport_;
};

/// Test double: answers through a callback, serialised by a mutex.
class ScriptedBackend : public ChatBackend {
public:
    using Script = std::function<std::string(const ChatRequest&)>;
    explicit ScriptedBackend(Script script) : script_(std::move(script)) {}
    /// Replays the given texts in order, repeating the last one.
    explicit ScriptedBackend(std::vector<std::string> replies);

    static ScriptedBackend sequence(std::vector<std::string> replies) { return ScriptedBackend(std::move(replies)); }

    ChatResponse complete(const ChatRequest& request) override;
    int calls() const;

private:
    Script script_;
    mutable std::mutex mutex_;
    int calls_ = 0;
};

}  // namespace arena::gateway
