#pragma once

#include "hdlcore/gateway.hpp"

#include <memory>
#include <string>

namespace hdlcore {

struct HttpGatewayConfig {
    std::string chat_endpoint;   // base URL, default path /v1/chat/completions
    std::string chat_model;
    std::string embed_endpoint;  // default path /v1/embeddings
    std::string embed_model;
    std::string rerank_endpoint; // default path /v1/rerank
    std::string rerank_model;
    std::string api_key;         // sent as a bearer token when non-empty

    int max_retries = 2;   // retries after the first attempt, on 5xx/transport errors
    int timeout_ms = 120000;
    int backoff_ms = 1000; // doubled per retry; 0 disables sleeping (tests)
    int max_inflight = 4;  // per-endpoint cap on concurrent requests
};

// OpenAI-compatible chat/embeddings client plus the common rerank shape
// {"query": ..., "documents": [...]} -> {"results": [{"index", "relevance_score"}]}.
class HttpGateway : public ModelGateway {
public:
    explicit HttpGateway(HttpGatewayConfig cfg);
    ~HttpGateway() override;

    bool rerank_available() const override;

protected:
    std::string chat_impl(const ChatRequest& req) override;
    std::vector<std::vector<double>> embed_impl(const std::vector<std::string>& texts) override;
    std::vector<RerankScore> rerank_impl(const std::string& query,
                                         const std::vector<std::string>& passages) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace hdlcore
