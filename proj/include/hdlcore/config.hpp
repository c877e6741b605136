#pragma once

#include "hdlcore/task.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdlcore {

class ModelGateway;

struct EndpointConfig {
    std::string endpoint;     // base URL; bare hosts get the default API path
    std::string model;
};

// Whole-process configuration. File values override defaults; CLI flags override
// file values. Unknown keys in the file are rejected with the offending key named.
struct GlobalConfig {
    EndpointConfig chat;
    EndpointConfig embed;
    EndpointConfig rerank;
    std::string api_key_env = "HDLCORE_API_KEY";
    std::string mock_fixture_dir; // non-empty selects the mock backend

    int max_retries = 2;       // retries after the first attempt
    int timeout_ms = 120000;
    int backoff_ms = 1000;     // doubled per retry
    int max_inflight = 4;
    int embed_batch = 64;
    int mock_embed_dim = 8;

    int retrieval_k = 10;
    int retrieval_n = 2;

    std::optional<double> temp_gen; // unset: 0.0 for pass@1, 0.7 for multi-attempt
    double temp_selfverify = 0.0;
    int max_tokens = 4096;
    std::size_t exemplar_char_budget = 8000;
    int summary_max_lines = 20;

    std::string template_dir; // empty: compiled-in templates
    std::vector<std::string> temporal_keywords = default_temporal_keywords();
    Complexity complexity_default = Complexity::Complex;

    int parallel_tasks = 2;
    int parallel_checks = 2;
    int check_timeout_ms = 60000;
    std::string log_level = "info";
};

GlobalConfig load_config(const std::string& path);
GlobalConfig parse_config_json(const std::string& text, const std::string& origin);

// Picks the mock backend when mock_fixture_dir is set, else the HTTP backend.
// Fails when neither a fixture dir nor a chat endpoint is configured and
// `require_chat` is true.
std::unique_ptr<ModelGateway> make_gateway(const GlobalConfig& cfg, bool require_chat = true);

} // namespace hdlcore
