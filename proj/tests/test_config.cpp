#include "doctest.h"

#include "hdlcore/config.hpp"
#include "hdlcore/errors.hpp"
#include "hdlcore/gateway.hpp"
#include "hdlcore/util.hpp"

using namespace hdlcore;

TEST_CASE("defaults stand when the file sets nothing") {
    auto cfg = parse_config_json("{}", "test");
    CHECK(cfg.retrieval_k == 10);
    CHECK(cfg.retrieval_n == 2);
    CHECK(cfg.max_retries == 2);
    CHECK(cfg.timeout_ms == 120000);
    CHECK(cfg.api_key_env == "HDLCORE_API_KEY");
    CHECK(cfg.complexity_default == Complexity::Complex);
    CHECK(cfg.parallel_tasks == 2);
    CHECK_FALSE(cfg.temp_gen.has_value());
    CHECK(cfg.temporal_keywords == default_temporal_keywords());
}

TEST_CASE("file values override defaults") {
    auto cfg = parse_config_json(R"({
        "chat": {"endpoint": "http://host:1234", "model": "m"},
        "retrieval": {"k": 7, "n": 3},
        "temperatures": {"gen": 0.5, "selfverify": 0.1},
        "temporal_keywords": ["clk", "tick"],
        "complexity_default": "simple",
        "template_dir": "/tmp/tpl",
        "parallel_tasks": 8
    })", "test");
    CHECK(cfg.chat.endpoint == "http://host:1234");
    CHECK(cfg.chat.model == "m");
    CHECK(cfg.retrieval_k == 7);
    CHECK(cfg.retrieval_n == 3);
    CHECK(cfg.temp_gen == 0.5);
    CHECK(cfg.temp_selfverify == 0.1);
    CHECK(cfg.temporal_keywords == std::vector<std::string>{"clk", "tick"});
    CHECK(cfg.complexity_default == Complexity::Simple);
    CHECK(cfg.template_dir == "/tmp/tpl");
    CHECK(cfg.parallel_tasks == 8);
}

TEST_CASE("unknown keys are rejected with the offending key named") {
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"retreival": {}})", "test"),
                         doctest::Contains("retreival"), Error);
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"retrieval": {"kk": 1}})", "test"),
                         doctest::Contains("retrieval.kk"), Error);
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"chat": {"endpoit": "x"}})", "test"),
                         doctest::Contains("chat.endpoit"), Error);
}

TEST_CASE("malformed values are domain errors") {
    CHECK_THROWS_AS(parse_config_json("not json", "test"), Error);
    CHECK_THROWS_AS(parse_config_json(R"({"retrieval": {"k": "ten"}})", "test"), Error);
    CHECK_THROWS_AS(parse_config_json(R"({"complexity_default": "medium"})", "test"), Error);
}

TEST_CASE("make_gateway picks the mock when a fixture dir is set") {
    TempDir dir("cfgfx");
    write_file(dir.path() / "f.txt", "key: PING\npong\n");
    GlobalConfig cfg;
    cfg.mock_fixture_dir = dir.path().string();
    auto gateway = make_gateway(cfg);
    ChatRequest req;
    req.messages.push_back({"user", "PING"});
    CHECK(gateway->chat(req) == "pong\n");
}

TEST_CASE("make_gateway without any backend is fatal when chat is required") {
    GlobalConfig cfg;
    CHECK_THROWS_AS(make_gateway(cfg), Error);
    CHECK_NOTHROW(make_gateway(cfg, /*require_chat=*/false));
}
