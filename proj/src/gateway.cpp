#include "hdlcore/gateway.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace hdlcore {

void ChatRequest::validate() const {
    if (messages.empty()) throw Error("chat request has no messages");
    if (messages.back().role != "user") throw Error("last chat message must have role user");
    for (const auto& m : messages)
        if (m.role != "system" && m.role != "user" && m.role != "assistant")
            throw Error("invalid chat role: " + m.role);
    if (temperature < 0.0 || temperature > 2.0)
        throw Error("temperature out of range [0, 2]: " + std::to_string(temperature));
    if (max_tokens <= 0) throw Error("max_tokens must be positive");
}

void normalize_l2(std::vector<double>& values) {
    double sq = 0.0;
    for (double v : values) sq += v * v;
    double norm = std::sqrt(sq);
    if (norm < 1e-12) {
        if (!values.empty()) values[0] = 1.0;
        return;
    }
    for (double& v : values) v /= norm;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '_') {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::string ModelGateway::chat(const ChatRequest& req) {
    req.validate();
    return chat_impl(req);
}

std::vector<EmbeddingVector> ModelGateway::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw Error("embed called with no texts");
    std::vector<std::string> prepared(texts.begin(), texts.end());
    for (auto& t : prepared)
        if (t.empty()) t = " ";

    auto raw = embed_impl(prepared);
    if (raw.size() != prepared.size())
        throw Error("embedding count mismatch: got " + std::to_string(raw.size()) +
                    " for " + std::to_string(prepared.size()) + " texts");

    std::vector<EmbeddingVector> out;
    out.reserve(raw.size());
    size_t dim = raw.empty() ? 0 : raw.front().size();
    for (auto& v : raw) {
        if (v.size() != dim || v.empty()) throw Error("inconsistent embedding dimension");
        normalize_l2(v);
        out.push_back(EmbeddingVector{std::move(v)});
    }
    return out;
}

std::vector<RerankScore> ModelGateway::rerank(const std::string& query,
                                              const std::vector<std::string>& passages) {
    if (passages.empty()) throw Error("rerank called with no passages");
    auto scores = rerank_impl(query, passages);
    if (scores.size() != passages.size())
        throw Error("rerank score count mismatch: got " + std::to_string(scores.size()) +
                    " for " + std::to_string(passages.size()) + " passages");
    for (const auto& s : scores)
        if (s.candidate_index < 0 || s.candidate_index >= static_cast<int>(passages.size()))
            throw Error("rerank returned out-of-range candidate index");
    std::sort(scores.begin(), scores.end(), [](const RerankScore& a, const RerankScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.candidate_index < b.candidate_index;
    });
    return scores;
}

// ---------------------------------------------------------------------------
// MockGateway
// ---------------------------------------------------------------------------

MockGateway::MockGateway(const std::filesystem::path& fixtures_dir, int embed_dim)
    : embed_dim_(embed_dim) {
    if (embed_dim_ <= 0) throw Error("mock embed dim must be positive");
    if (fixtures_dir.empty()) return;
    if (!std::filesystem::is_directory(fixtures_dir))
        throw Error("mock fixture directory not found: " + fixtures_dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(fixtures_dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    for (const auto& f : files) {
        std::string content = read_file(f);
        size_t nl = content.find('\n');
        std::string first = nl == std::string::npos ? content : content.substr(0, nl);
        if (!first.starts_with("key:"))
            throw Error("mock fixture missing `key:` first line: " + f.string());
        Fixture fx;
        fx.filename = f.filename().string();
        fx.key = trim(first.substr(4));
        fx.reply = nl == std::string::npos ? "" : content.substr(nl + 1);
        if (fx.key.empty()) throw Error("mock fixture has empty key: " + f.string());
        fixtures_.push_back(std::move(fx));
    }
}

int MockGateway::chat_calls() const { return chat_calls_.load(); }
int MockGateway::embed_calls() const { return embed_calls_.load(); }
int MockGateway::rerank_calls() const { return rerank_calls_.load(); }

std::string MockGateway::chat_impl(const ChatRequest& req) {
    chat_calls_.fetch_add(1);
    std::string prompt;
    for (const auto& m : req.messages) {
        prompt += m.content;
        prompt += '\n';
    }
    for (const auto& fx : fixtures_)
        if (prompt.find(fx.key) != std::string::npos) return fx.reply;
    throw GatewayError("no mock fixture matches the prompt");
}

std::vector<std::vector<double>> MockGateway::embed_impl(const std::vector<std::string>& texts) {
    embed_calls_.fetch_add(1);
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        std::uint64_t state = fnv1a64(t);
        std::vector<double> v(static_cast<size_t>(embed_dim_));
        for (double& x : v) {
            // 53 random bits scaled into [-1, 1)
            x = static_cast<double>(splitmix64(state) >> 11) / 4503599627370496.0 - 1.0;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<RerankScore> MockGateway::rerank_impl(const std::string& query,
                                                  const std::vector<std::string>& passages) {
    rerank_calls_.fetch_add(1);
    auto qtok = word_tokens(query);
    std::set<std::string> qset(qtok.begin(), qtok.end());
    std::vector<RerankScore> scores;
    scores.reserve(passages.size());
    for (size_t i = 0; i < passages.size(); ++i) {
        auto ptok = word_tokens(passages[i]);
        std::set<std::string> pset(ptok.begin(), ptok.end());
        int shared = 0;
        for (const auto& t : pset)
            if (qset.count(t)) ++shared;
        scores.push_back(RerankScore{static_cast<int>(i), static_cast<double>(shared)});
    }
    return scores;
}

} // namespace hdlcore
