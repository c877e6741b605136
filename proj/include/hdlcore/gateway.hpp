#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

namespace hdlcore {

struct ChatMessage {
    std::string role; // system | user | assistant
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 4096;
    std::string model_name;

    void validate() const; // throws Error on contract violations
};

struct EmbeddingVector {
    std::vector<double> values; // unit L2 norm at the gateway boundary
    int dim() const { return static_cast<int>(values.size()); }
};

struct RerankScore {
    int candidate_index = 0;
    double score = 0.0;
};

// Uniform client for the three remote model capabilities. The non-virtual entry
// points own the boundary invariants: requests are validated, empty texts are
// replaced by " " before dispatch, embeddings come back L2-normalized with a
// consistent dimension, and rerank results are one score per passage sorted by
// descending score (ties by ascending candidate index).
class ModelGateway {
public:
    virtual ~ModelGateway() = default;

    std::string chat(const ChatRequest& req);
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts);
    std::vector<RerankScore> rerank(const std::string& query,
                                    const std::vector<std::string>& passages);

    virtual bool rerank_available() const = 0;

protected:
    virtual std::string chat_impl(const ChatRequest& req) = 0;
    virtual std::vector<std::vector<double>> embed_impl(const std::vector<std::string>& texts) = 0;
    virtual std::vector<RerankScore> rerank_impl(const std::string& query,
                                                 const std::vector<std::string>& passages) = 0;
};

// Deterministic offline backend.
//
// chat: replies come from fixture files. A fixture is a text file whose first
// line is `key: <substring>`; the rest of the file is the reply. The first
// fixture (lexicographic filename order) whose key occurs anywhere in the
// outgoing message contents wins. No match is a gateway error.
//
// embed: texts hash to a fixed-dimension vector, so identical text embeds
// identically and self-similarity is maximal.
//
// rerank: score = number of distinct lowercase tokens shared between query and
// passage.
class MockGateway : public ModelGateway {
public:
    explicit MockGateway(const std::filesystem::path& fixtures_dir = {}, int embed_dim = 8);

    bool rerank_available() const override { return rerank_enabled_; }
    void set_rerank_available(bool v) { rerank_enabled_ = v; }

    int chat_calls() const;
    int embed_calls() const;
    int rerank_calls() const;

protected:
    std::string chat_impl(const ChatRequest& req) override;
    std::vector<std::vector<double>> embed_impl(const std::vector<std::string>& texts) override;
    std::vector<RerankScore> rerank_impl(const std::string& query,
                                         const std::vector<std::string>& passages) override;

private:
    struct Fixture {
        std::string filename;
        std::string key;
        std::string reply;
    };
    std::vector<Fixture> fixtures_;
    int embed_dim_;
    bool rerank_enabled_ = true;
    mutable std::atomic<int> chat_calls_{0};
    mutable std::atomic<int> embed_calls_{0};
    mutable std::atomic<int> rerank_calls_{0};
};

// Shared helpers (also used by tests).
void normalize_l2(std::vector<double>& values);
std::vector<std::string> word_tokens(std::string_view text); // lowercase [a-z0-9_]+ runs

} // namespace hdlcore
