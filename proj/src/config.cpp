#include "hdlcore/config.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/http_gateway.hpp"
#include "hdlcore/util.hpp"

#include <json.hpp>

#include <cstdlib>
#include <set>

namespace hdlcore {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix, const std::string& origin) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw Error("unknown config key: " + prefix + key + " in " + origin);
    }
}

EndpointConfig parse_endpoint(const json& j, const std::string& prefix,
                              const std::string& origin) {
    reject_unknown(j, {"endpoint", "model"}, prefix, origin);
    EndpointConfig e;
    if (j.contains("endpoint")) e.endpoint = j["endpoint"].get<std::string>();
    if (j.contains("model")) e.model = j["model"].get<std::string>();
    return e;
}

} // namespace

GlobalConfig parse_config_json(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error("unparseable config file: " + origin);

    static const std::set<std::string> top_keys = {
        "chat", "embed", "rerank", "api_key_env", "mock_fixture_dir",
        "retries", "timeout_ms", "backoff_ms", "max_inflight", "embed_batch",
        "mock_embed_dim", "retrieval", "temperatures", "max_tokens",
        "exemplar_char_budget", "summary_max_lines", "template_dir",
        "temporal_keywords", "complexity_default", "parallel_tasks",
        "parallel_checks", "check_timeout_ms", "log_level",
    };
    reject_unknown(j, top_keys, "", origin);

    GlobalConfig cfg;
    try {
        if (j.contains("chat")) cfg.chat = parse_endpoint(j["chat"], "chat.", origin);
        if (j.contains("embed")) cfg.embed = parse_endpoint(j["embed"], "embed.", origin);
        if (j.contains("rerank")) cfg.rerank = parse_endpoint(j["rerank"], "rerank.", origin);
        if (j.contains("api_key_env")) cfg.api_key_env = j["api_key_env"].get<std::string>();
        if (j.contains("mock_fixture_dir"))
            cfg.mock_fixture_dir = j["mock_fixture_dir"].get<std::string>();
        if (j.contains("retries")) cfg.max_retries = j["retries"].get<int>();
        if (j.contains("timeout_ms")) cfg.timeout_ms = j["timeout_ms"].get<int>();
        if (j.contains("backoff_ms")) cfg.backoff_ms = j["backoff_ms"].get<int>();
        if (j.contains("max_inflight")) cfg.max_inflight = j["max_inflight"].get<int>();
        if (j.contains("embed_batch")) cfg.embed_batch = j["embed_batch"].get<int>();
        if (j.contains("mock_embed_dim")) cfg.mock_embed_dim = j["mock_embed_dim"].get<int>();

        if (j.contains("retrieval")) {
            reject_unknown(j["retrieval"], {"k", "n"}, "retrieval.", origin);
            if (j["retrieval"].contains("k")) cfg.retrieval_k = j["retrieval"]["k"].get<int>();
            if (j["retrieval"].contains("n")) cfg.retrieval_n = j["retrieval"]["n"].get<int>();
        }
        if (j.contains("temperatures")) {
            reject_unknown(j["temperatures"], {"gen", "selfverify"}, "temperatures.", origin);
            if (j["temperatures"].contains("gen"))
                cfg.temp_gen = j["temperatures"]["gen"].get<double>();
            if (j["temperatures"].contains("selfverify"))
                cfg.temp_selfverify = j["temperatures"]["selfverify"].get<double>();
        }
        if (j.contains("max_tokens")) cfg.max_tokens = j["max_tokens"].get<int>();
        if (j.contains("exemplar_char_budget"))
            cfg.exemplar_char_budget = j["exemplar_char_budget"].get<std::size_t>();
        if (j.contains("summary_max_lines"))
            cfg.summary_max_lines = j["summary_max_lines"].get<int>();
        if (j.contains("template_dir")) cfg.template_dir = j["template_dir"].get<std::string>();
        if (j.contains("temporal_keywords"))
            cfg.temporal_keywords = j["temporal_keywords"].get<std::vector<std::string>>();
        if (j.contains("complexity_default")) {
            std::string v = to_lower(j["complexity_default"].get<std::string>());
            if (v == "simple") cfg.complexity_default = Complexity::Simple;
            else if (v == "complex") cfg.complexity_default = Complexity::Complex;
            else throw Error("complexity_default must be simple or complex in " + origin);
        }
        if (j.contains("parallel_tasks")) cfg.parallel_tasks = j["parallel_tasks"].get<int>();
        if (j.contains("parallel_checks")) cfg.parallel_checks = j["parallel_checks"].get<int>();
        if (j.contains("check_timeout_ms"))
            cfg.check_timeout_ms = j["check_timeout_ms"].get<int>();
        if (j.contains("log_level")) cfg.log_level = j["log_level"].get<std::string>();
    } catch (const json::exception& e) {
        throw Error("malformed config value in " + origin + ": " + e.what());
    }
    return cfg;
}

GlobalConfig load_config(const std::string& path) {
    return parse_config_json(read_file(path), path);
}

std::unique_ptr<ModelGateway> make_gateway(const GlobalConfig& cfg, bool require_chat) {
    if (!cfg.mock_fixture_dir.empty())
        return std::make_unique<MockGateway>(cfg.mock_fixture_dir, cfg.mock_embed_dim);

    if (cfg.chat.endpoint.empty() && cfg.embed.endpoint.empty() &&
        cfg.rerank.endpoint.empty()) {
        if (require_chat)
            throw Error("no gateway configured: set mock_fixture_dir or chat/embed endpoints");
        return std::make_unique<MockGateway>();
    }

    HttpGatewayConfig http;
    http.chat_endpoint = cfg.chat.endpoint;
    http.chat_model = cfg.chat.model;
    http.embed_endpoint = cfg.embed.endpoint;
    http.embed_model = cfg.embed.model;
    http.rerank_endpoint = cfg.rerank.endpoint;
    http.rerank_model = cfg.rerank.model;
    http.max_retries = cfg.max_retries;
    http.timeout_ms = cfg.timeout_ms;
    http.backoff_ms = cfg.backoff_ms;
    http.max_inflight = cfg.max_inflight;
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key)
        http.api_key = key;
    return std::make_unique<HttpGateway>(std::move(http));
}

} // namespace hdlcore
