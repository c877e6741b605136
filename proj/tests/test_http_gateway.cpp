#include "doctest.h"

#include "hdlcore/errors.hpp"
#include "hdlcore/http_gateway.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <thread>

using namespace hdlcore;
using nlohmann::json;

namespace {

// Local OpenAI-shaped server for gateway tests.
class TestServer {
public:
    TestServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            ++chat_hits_;
            if (fail_next_ > 0) {
                --fail_next_;
                res.status = 500;
                return;
            }
            if (reject_) {
                res.status = 400;
                res.set_content("{\"error\": \"bad request\"}", "application/json");
                return;
            }
            last_request_ = json::parse(req.body);
            json reply{{"choices",
                        json::array({{{"message",
                                       {{"role", "assistant"}, {"content", "pong"}}}}})}};
            res.set_content(reply.dump(), "application/json");
        });
        server_.Post("/v1/embeddings", [](const httplib::Request& req,
                                          httplib::Response& res) {
            auto body = json::parse(req.body);
            json data = json::array();
            int i = 0;
            for (const auto& text : body["input"]) {
                double bias = 1.0 + static_cast<double>(text.get<std::string>().size());
                // unnormalized on purpose; reverse order exercises index mapping
                data.push_back({{"index", i}, {"embedding", {3.0 * bias, 4.0 * bias, 0.0}}});
                ++i;
            }
            std::reverse(data.begin(), data.end());
            res.set_content(json{{"data", data}}.dump(), "application/json");
        });
        server_.Post("/v1/rerank", [](const httplib::Request& req, httplib::Response& res) {
            auto body = json::parse(req.body);
            json results = json::array();
            int i = 0;
            for (const auto& doc : body["documents"]) {
                (void)doc;
                results.push_back({{"index", i}, {"relevance_score", 10.0 - i}});
                ++i;
            }
            res.set_content(json{{"results", results}}.dump(), "application/json");
        });

        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~TestServer() {
        server_.stop();
        thread_.join();
    }

    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_); }

    std::atomic<int> chat_hits_{0};
    std::atomic<int> fail_next_{0};
    std::atomic<bool> reject_{false};
    json last_request_;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

HttpGatewayConfig config_for(const TestServer& server) {
    HttpGatewayConfig cfg;
    cfg.chat_endpoint = server.base();
    cfg.chat_model = "test-model";
    cfg.embed_endpoint = server.base();
    cfg.embed_model = "test-embed";
    cfg.rerank_endpoint = server.base();
    cfg.rerank_model = "test-rerank";
    cfg.backoff_ms = 0; // no sleeping in tests
    cfg.max_retries = 2;
    cfg.timeout_ms = 5000;
    return cfg;
}

} // namespace

TEST_CASE("chat posts the OpenAI shape and returns the content") {
    TestServer server;
    HttpGateway gateway(config_for(server));

    ChatRequest req;
    req.messages.push_back({"system", "be brief"});
    req.messages.push_back({"user", "ping"});
    req.temperature = 0.25;
    req.max_tokens = 32;
    CHECK(gateway.chat(req) == "pong");
    CHECK(server.last_request_["model"] == "test-model");
    CHECK(server.last_request_["temperature"] == 0.25);
    CHECK(server.last_request_["messages"][1]["content"] == "ping");
}

TEST_CASE("three 500s with retry limit 2 is a typed error after 2 retries") {
    TestServer server;
    server.fail_next_ = 3;
    HttpGateway gateway(config_for(server));

    ChatRequest req;
    req.messages.push_back({"user", "ping"});
    CHECK_THROWS_AS(gateway.chat(req), GatewayTimeout);
    CHECK(server.chat_hits_.load() == 3); // initial attempt + 2 retries
}

TEST_CASE("transient 500s recover within the retry budget") {
    TestServer server;
    server.fail_next_ = 2;
    HttpGateway gateway(config_for(server));

    ChatRequest req;
    req.messages.push_back({"user", "ping"});
    CHECK(gateway.chat(req) == "pong");
    CHECK(server.chat_hits_.load() == 3);
}

TEST_CASE("4xx responses are non-retryable gateway errors with the status") {
    TestServer server;
    server.reject_ = true;
    HttpGateway gateway(config_for(server));

    ChatRequest req;
    req.messages.push_back({"user", "ping"});
    try {
        gateway.chat(req);
        FAIL("expected GatewayError");
    } catch (const GatewayError& e) {
        CHECK(e.status() == 400);
    }
    CHECK(server.chat_hits_.load() == 1);
}

TEST_CASE("embeddings map by index and come back normalized") {
    TestServer server;
    HttpGateway gateway(config_for(server));

    auto vecs = gateway.embed({"a", "bb"});
    REQUIRE(vecs.size() == 2);
    for (const auto& v : vecs) {
        double sq = 0.0;
        for (double x : v.values) sq += x * x;
        CHECK(std::fabs(std::sqrt(sq) - 1.0) <= 1e-6);
        // scale-invariant normalization of the (3,4,0) direction
        CHECK(v.values[0] == doctest::Approx(0.6).epsilon(1e-9));
        CHECK(v.values[1] == doctest::Approx(0.8).epsilon(1e-9));
    }
}

TEST_CASE("rerank parses the common results shape") {
    TestServer server;
    HttpGateway gateway(config_for(server));
    CHECK(gateway.rerank_available());

    auto scores = gateway.rerank("q", {"d0", "d1", "d2"});
    REQUIRE(scores.size() == 3);
    CHECK(scores[0].candidate_index == 0);
    CHECK(scores[0].score == doctest::Approx(10.0));
    CHECK(scores[2].candidate_index == 2);
}

TEST_CASE("unreachable endpoint exhausts retries into a timeout error") {
    HttpGatewayConfig cfg;
    cfg.chat_endpoint = "http://127.0.0.1:1"; // nothing listens here
    cfg.backoff_ms = 0;
    cfg.max_retries = 1;
    cfg.timeout_ms = 500;
    HttpGateway gateway(cfg);

    ChatRequest req;
    req.messages.push_back({"user", "ping"});
    CHECK_THROWS_AS(gateway.chat(req), GatewayTimeout);
}
