#include "hdlcore/http_gateway.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/log.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace hdlcore {

namespace {

using nlohmann::json;

struct SplitUrl {
    std::string base; // scheme://host[:port]
    std::string path; // empty when the endpoint gave none
};

SplitUrl split_url(const std::string& url) {
    size_t scheme = url.find("://");
    if (scheme == std::string::npos) throw Error("endpoint URL needs a scheme: " + url);
    size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, ""};
    return {url.substr(0, slash), url.substr(slash)};
}

// Simple bounded-concurrency guard per endpoint.
class InflightCap {
public:
    explicit InflightCap(int limit) : limit_(limit) {}

    void acquire() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return active_ < limit_; });
        ++active_;
    }
    void release() {
        std::lock_guard lock(mu_);
        --active_;
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int limit_;
    int active_ = 0;
};

struct CapGuard {
    InflightCap& cap;
    explicit CapGuard(InflightCap& c) : cap(c) { cap.acquire(); }
    ~CapGuard() { cap.release(); }
};

} // namespace

struct HttpGateway::Impl {
    HttpGatewayConfig cfg;
    InflightCap chat_cap;
    InflightCap embed_cap;
    InflightCap rerank_cap;

    explicit Impl(HttpGatewayConfig c)
        : cfg(std::move(c)),
          chat_cap(cfg.max_inflight),
          embed_cap(cfg.max_inflight),
          rerank_cap(cfg.max_inflight) {}

    // POSTs JSON with retry on transport errors and 5xx responses. 4xx responses
    // are non-retryable gateway errors; exhausted retries become a timeout error.
    json post_json(const std::string& endpoint, const std::string& default_path,
                   const json& body) {
        SplitUrl url = split_url(endpoint);
        std::string path = url.path.empty() ? default_path : url.path;

        std::string last_failure;
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            if (attempt > 0 && cfg.backoff_ms > 0) {
                int sleep_ms = cfg.backoff_ms << (attempt - 1);
                std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
            }

            httplib::Client client(url.base);
            client.set_connection_timeout(cfg.timeout_ms / 1000, (cfg.timeout_ms % 1000) * 1000);
            client.set_read_timeout(cfg.timeout_ms / 1000, (cfg.timeout_ms % 1000) * 1000);
            client.set_write_timeout(cfg.timeout_ms / 1000, (cfg.timeout_ms % 1000) * 1000);
            if (!cfg.api_key.empty()) client.set_bearer_token_auth(cfg.api_key);

            auto res = client.Post(path, body.dump(), "application/json");
            if (!res) {
                last_failure = "transport error: " + httplib::to_string(res.error());
                log(LogLevel::Debug, "retrying " + endpoint + ": " + last_failure);
                continue;
            }
            if (res->status >= 200 && res->status < 300) {
                json parsed = json::parse(res->body, nullptr, false);
                if (parsed.is_discarded())
                    throw GatewayError("endpoint returned unparseable JSON", res->status);
                return parsed;
            }
            if (res->status >= 500) {
                last_failure = "server error " + std::to_string(res->status);
                log(LogLevel::Debug, "retrying " + endpoint + ": " + last_failure);
                continue;
            }
            throw GatewayError("endpoint error " + std::to_string(res->status) + ": " +
                                   res->body.substr(0, 200),
                               res->status);
        }
        throw GatewayTimeout("retries exhausted (" + std::to_string(cfg.max_retries) +
                             " retries) against " + endpoint + ": " + last_failure);
    }
};

HttpGateway::HttpGateway(HttpGatewayConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
    if (impl_->cfg.chat_endpoint.empty() && impl_->cfg.embed_endpoint.empty() &&
        impl_->cfg.rerank_endpoint.empty())
        throw Error("HTTP gateway configured with no endpoints");
}

HttpGateway::~HttpGateway() = default;

bool HttpGateway::rerank_available() const { return !impl_->cfg.rerank_endpoint.empty(); }

std::string HttpGateway::chat_impl(const ChatRequest& req) {
    if (impl_->cfg.chat_endpoint.empty()) throw Error("no chat endpoint configured");
    CapGuard guard(impl_->chat_cap);

    json messages = json::array();
    for (const auto& m : req.messages)
        messages.push_back({{"role", m.role}, {"content", m.content}});
    json body{
        {"model", req.model_name.empty() ? impl_->cfg.chat_model : req.model_name},
        {"messages", messages},
        {"temperature", req.temperature},
        {"max_tokens", req.max_tokens},
    };

    json reply = impl_->post_json(impl_->cfg.chat_endpoint, "/v1/chat/completions", body);
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw GatewayError(std::string("malformed chat response: ") + e.what());
    }
}

std::vector<std::vector<double>> HttpGateway::embed_impl(const std::vector<std::string>& texts) {
    if (impl_->cfg.embed_endpoint.empty()) throw Error("no embedding endpoint configured");
    CapGuard guard(impl_->embed_cap);

    json body{{"model", impl_->cfg.embed_model}, {"input", texts}};
    json reply = impl_->post_json(impl_->cfg.embed_endpoint, "/v1/embeddings", body);

    std::vector<std::vector<double>> out(texts.size());
    try {
        for (const auto& item : reply.at("data")) {
            size_t index = item.at("index").get<size_t>();
            if (index >= out.size()) throw GatewayError("embedding index out of range");
            out[index] = item.at("embedding").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw GatewayError(std::string("malformed embeddings response: ") + e.what());
    }
    for (const auto& v : out)
        if (v.empty()) throw GatewayError("embeddings response missing entries");
    return out;
}

std::vector<RerankScore> HttpGateway::rerank_impl(const std::string& query,
                                                  const std::vector<std::string>& passages) {
    if (impl_->cfg.rerank_endpoint.empty()) throw Error("no rerank endpoint configured");
    CapGuard guard(impl_->rerank_cap);

    json body{{"model", impl_->cfg.rerank_model}, {"query", query}, {"documents", passages}};
    json reply = impl_->post_json(impl_->cfg.rerank_endpoint, "/v1/rerank", body);

    std::vector<RerankScore> scores;
    try {
        for (const auto& item : reply.at("results"))
            scores.push_back(RerankScore{item.at("index").get<int>(),
                                         item.at("relevance_score").get<double>()});
    } catch (const json::exception& e) {
        throw GatewayError(std::string("malformed rerank response: ") + e.what());
    }
    return scores;
}

} // namespace hdlcore
