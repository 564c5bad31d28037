#include <doctest.h>

#include "arena/gateway.hpp"
#include "arena/level_gen.hpp"
#include "fixtures.hpp"

using namespace arena;
using namespace arena::gateway;

TEST_CASE("maze prompt knowledge section") {
    const auto s = maze::init(fixture::coin_approach(), 1);
    const auto plain = build_maze_prompt(s, {}, {});
    CHECK(plain.user.find("Training Knowledge") == std::string::npos);
    CHECK(plain.system.find("Training Knowledge") == std::string::npos);
    CHECK(plain.user.find(std::string(maze::kFullVisionNote)) == std::string::npos);

    const std::vector<std::string> truths = {"Prefer exploring edges.", "Avoid monsters."};
    const auto taught = build_maze_prompt(s, truths, {});
    const std::string expected = std::string(kKnowledgeHeader) + "\n1. Prefer exploring edges.\n2. Avoid monsters.\n";
    CHECK(taught.user.find(expected) != std::string::npos);

    const auto full = build_maze_prompt(s, {}, {true, false});
    CHECK(full.user.find(std::string(maze::kFullVisionNote)) != std::string::npos);
    CHECK(full.user.find(" 6 | . C . . . . . . C") != std::string::npos);
}

TEST_CASE("prompts are byte-stable") {
    const auto s = maze::init(fixture::coin_approach(), 1);
    const std::vector<std::string> truths = {"x"};
    const auto a = build_maze_prompt(s, truths, {});
    const auto b = build_maze_prompt(s, truths, {});
    CHECK(a.system == b.system);
    CHECK(a.user == b.user);
    CHECK(maze_system_prompt(Level::Easy) != maze_system_prompt(Level::Hard));
}

TEST_CASE("match-2 prompt for the worked-example state") {
    const auto s = fixture::worked_state();
    const auto p = build_match2_prompt(s, {}, {});
    CHECK(p.user.find("Steps remaining: 15") != std::string::npos);
    CHECK(p.user.find("Inventory: row=0, col=1, bomb=2, hammer=1") != std::string::npos);
    CHECK(p.user.find("Color targets: A:10, B:6, C:8, D:6") != std::string::npos);
    CHECK(p.user.find("C D D A B B C B\n") == 0);
    CHECK(p.user.find("Training Knowledge") == std::string::npos);
    CHECK(p.system.find("hammer (clear 1 tile") != std::string::npos);
}

TEST_CASE("no-props prompt") {
    const auto cfg = level_gen::gen_match2(Level::Easy, 4);
    const auto s = level_gen::init_match2(cfg, true);
    const auto p = build_match2_prompt(s, {}, {false, true});
    CHECK(p.user.find("Inventory: row=0, col=0, bomb=0, hammer=0") != std::string::npos);
    CHECK(p.system.find("hammer (clear 1 tile") == std::string::npos);
    CHECK(p.system.find("\"bomb\"") == std::string::npos);
}

TEST_CASE("maze action parsing") {
    CHECK(parse_maze_action("I will go right.\n**Action: 9**")->id() == 9);
    CHECK_FALSE(parse_maze_action("Action: 12").has_value());
    CHECK(parse_maze_action("Action: 3 ... on reflection Action: 9")->id() == 9);
    CHECK_FALSE(parse_maze_action("move right").has_value());
    CHECK(parse_maze_action("action:0")->id() == 0);
    for (int id = 0; id < 12; ++id) CHECK(parse_maze_action(format_maze_action(maze::MazeAction::from_id(id)))->id() == id);
}

TEST_CASE("match-2 action parsing") {
    auto r = parse_match2_action(R"({"action": {"type": "eliminate", "pos": [4,3]}})");
    REQUIRE(std::holds_alternative<match2::MatchAction>(r));
    CHECK(std::get<match2::MatchAction>(r) == match2::MatchAction{match2::Eliminate{{4, 3}}});

    CHECK(std::holds_alternative<NoAction>(parse_match2_action(R"({"action": null})")));
    CHECK(std::holds_alternative<ParseFailure>(parse_match2_action(R"({"action": {"type": "row"}})")));
    CHECK(std::holds_alternative<ParseFailure>(parse_match2_action("no json here")));
    CHECK(std::holds_alternative<ParseFailure>(parse_match2_action(R"({"action": {"type": "laser", "index": 1}})")));

    r = parse_match2_action("Thinking {\"note\": 1} then {\"action\": {\"type\": \"col\", \"index\": 2}} and finally "
                            "```json\n{\"action\": {\"type\": \"bomb\", \"pos\": [1, 1]}}\n```");
    REQUIRE(std::holds_alternative<match2::MatchAction>(r));
    CHECK(std::get<match2::MatchAction>(r) == match2::MatchAction{match2::Bomb{{1, 1}}});
}

TEST_CASE("every legal match-2 action survives a format/parse round trip") {
    auto s = fixture::worked_state();
    s.inventory = {1, 1, 1, 1};
    for (const auto& a : match2::legal_actions(s)) {
        const auto r = parse_match2_action(match2::format_action(a));
        REQUIRE(std::holds_alternative<match2::MatchAction>(r));
        CHECK(std::get<match2::MatchAction>(r) == a);
    }
}

namespace {

ChatRequest hello() { return {{{"user", "hi"}}}; }

std::string completion(const std::string& text) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}}.dump();
}

BackendConfig fast_config() {
    BackendConfig c;
    c.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    c.api_key_env = "";
    c.backoff_initial_ms = 1;
    c.backoff_max_ms = 2;
    return c;
}

}  // namespace

TEST_CASE("backend retries transport failures then succeeds") {
    int calls = 0;
    HttpChatBackend backend(fast_config(), [&](const std::string&, const std::string& body, const Headers&, double) {
        ++calls;
        CHECK(nlohmann::json::parse(body)["model"] == "gpt-4.1");
        if (calls <= 2) return HttpResult{0, "", "timeout"};
        return HttpResult{200, completion("Action: 4"), ""};
    });
    const auto r = backend.complete(hello());
    CHECK(r.text == "Action: 4");
    CHECK(r.attempts == 3);
    CHECK(r.attempt_log.size() == 3);
    CHECK(r.attempt_log[0].error == "timeout");
}

TEST_CASE("backend gives up on permanent server errors") {
    int calls = 0;
    HttpChatBackend backend(fast_config(), [&](const std::string&, const std::string&, const Headers&, double) {
        ++calls;
        return HttpResult{500, "oops", ""};
    });
    try {
        (void)backend.complete(hello());
        FAIL("expected BackendUnavailable");
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::BackendUnavailable);
    }
    CHECK(calls == fast_config().max_retries + 1);
}

TEST_CASE("client errors are not retried") {
    int calls = 0;
    HttpChatBackend backend(fast_config(), [&](const std::string&, const std::string&, const Headers&, double) {
        ++calls;
        return HttpResult{401, "bad key", ""};
    });
    CHECK_THROWS_AS(backend.complete(hello()), GameError);
    CHECK(calls == 1);
}

TEST_CASE("backend config parsing") {
    const auto c = backend_config_from_json({{"model", "m"}, {"max_retries", 5}});
    CHECK(c.model == "m");
    CHECK(c.max_retries == 5);
    CHECK(backend_config_from_json(to_json(c)).model == "m");
    CHECK_THROWS_AS(backend_config_from_json({{"max_retries", -1}}), GameError);
    CHECK_THROWS_AS(extract_content("{}"), GameError);
}

TEST_CASE("scripted backend passes a scripted action through") {
    auto b = ScriptedBackend::sequence({"first", "Action: 9"});
    CHECK(b.complete(hello()).text == "first");
    CHECK(parse_maze_action(b.complete(hello()).text)->id() == 9);
    CHECK(b.complete(hello()).text == "Action: 9");
    CHECK(b.calls() == 3);
}

TEST_CASE("real HTTP transport reports an unreachable endpoint as a transport error") {
    const auto t = http_transport();
    const auto r = t("http://127.0.0.1:1/v1/chat/completions", "{}", {}, 0.5);
    CHECK(r.status == 0);
    CHECK_FALSE(r.error.empty());
}
