#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <thread>

#include "arena/gateway.hpp"

namespace arena::gateway {

using nlohmann::json;

json to_json(const ChatExchange& e) {
    return json{{"system", e.system},
                {"user", e.user},
                {"response", e.response},
                {"latency_ms", e.latency_ms},
                {"attempts", e.attempts}};
}

ChatExchange chat_exchange_from_json(const json& j) {
    ChatExchange e;
    e.system = j.value("system", "");
    e.user = j.value("user", "");
    e.response = j.value("response", "");
    e.latency_ms = j.value("latency_ms", 0.0);
    e.attempts = j.value("attempts", 1);
    return e;
}

BackendConfig backend_config_from_json(const json& j) {
    BackendConfig c;
    c.endpoint = j.value("endpoint", c.endpoint);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.backoff_initial_ms = j.value("backoff_initial_ms", c.backoff_initial_ms);
    c.backoff_factor = j.value("backoff_factor", c.backoff_factor);
    c.backoff_max_ms = j.value("backoff_max_ms", c.backoff_max_ms);
    if (c.max_retries < 0) throw GameError(ErrorCode::InvalidConfig, "max_retries must be >= 0");
    if (!(c.timeout_seconds > 0)) throw GameError(ErrorCode::InvalidConfig, "timeout_seconds must be > 0");
    return c;
}

json to_json(const BackendConfig& c) {
    return json{{"endpoint", c.endpoint},
                {"model", c.model},
                {"api_key_env", c.api_key_env},
                {"temperature", c.temperature},
                {"max_retries", c.max_retries},
                {"timeout_seconds", c.timeout_seconds},
                {"backoff_initial_ms", c.backoff_initial_ms},
                {"backoff_factor", c.backoff_factor},
                {"backoff_max_ms", c.backoff_max_ms}};
}

BackendConfig load_backend_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GameError(ErrorCode::InvalidConfig, "cannot open backend config " + path);
    return backend_config_from_json(json::parse(in));
}

std::string build_request_body(const BackendConfig& config, const ChatRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    return json{{"model", config.model}, {"messages", messages}, {"temperature", config.temperature}}.dump();
}

std::string extract_content(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw GameError(ErrorCode::ParseFailure, "backend returned non-JSON body");
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw GameError(ErrorCode::ParseFailure, std::string("unexpected completion payload: ") + e.what());
    }
}

HttpChatBackend::HttpChatBackend(BackendConfig config, Transport transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (config_.max_retries < 0) throw GameError(ErrorCode::InvalidConfig, "max_retries must be >= 0");
    if (!(config_.timeout_seconds > 0)) throw GameError(ErrorCode::InvalidConfig, "timeout_seconds must be > 0");
}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
    Headers headers{{"Content-Type", "application/json"}};
    if (!config_.api_key_env.empty()) {
        if (const char* token = std::getenv(config_.api_key_env.c_str()); token && *token)
            headers.emplace_back("Authorization", std::string("Bearer ") + token);
    }
    const std::string body = build_request_body(config_, request);

    ChatResponse response;
    double delay_ms = config_.backoff_initial_ms;
    const int max_attempts = config_.max_retries + 1;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        const auto t0 = std::chrono::steady_clock::now();
        const HttpResult r = transport_(config_.endpoint, body, headers, config_.timeout_seconds);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        response.attempt_log.push_back({r.status, r.error, ms});
        response.latency_ms += ms;
        response.attempts = attempt;

        if (r.status >= 200 && r.status < 300) {
            response.text = extract_content(r.body);
            return response;
        }
        const bool retryable = r.status == 0 || r.status == 429 || r.status >= 500;
        if (!retryable)
            throw GameError(ErrorCode::BackendUnavailable,
                           "backend rejected request with HTTP " + std::to_string(r.status) + ": " + r.body);
        if (attempt < max_attempts) {
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(delay_ms));
            delay_ms = std::min(delay_ms * config_.backoff_factor, static_cast<double>(config_.backoff_max_ms));
        }
    }
    std::string detail;
    for (const auto& a : response.attempt_log)
        detail += " [" + (a.status ? "HTTP " + std::to_string(a.status) : "transport: " + a.error) + "]";
    throw GameError(ErrorCode::BackendUnavailable,
                   "backend unavailable after " + std::to_string(max_attempts) + " attempts:" + detail);
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies)
    : script_([replies = std::move(replies), index = std::size_t{0}](const ChatRequest&) mutable {
          if (replies.empty()) return std::string{};
          return replies[std::min(index++, replies.size() - 1)];
      }) {}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    ++calls_;
    ChatResponse r;
    r.text = script_(request);
    return r;
}

int ScriptedBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

}  // namespace arena::gateway
