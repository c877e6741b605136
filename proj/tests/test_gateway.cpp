#include "doctest.h"

#include "hdlcore/errors.hpp"
#include "hdlcore/gateway.hpp"
#include "hdlcore/util.hpp"

#include <cmath>

using namespace hdlcore;

namespace {

double l2_norm(const EmbeddingVector& v) {
    double sq = 0.0;
    for (double x : v.values) sq += x * x;
    return std::sqrt(sq);
}

} // namespace

TEST_CASE("chat request validation") {
    ChatRequest req;
    CHECK_THROWS_AS(req.validate(), Error); // no messages
    req.messages.push_back({"user", "hi"});
    CHECK_NOTHROW(req.validate());
    req.messages.push_back({"assistant", "reply"});
    CHECK_THROWS_AS(req.validate(), Error); // last message not user
    req.messages.push_back({"user", "again"});
    req.temperature = 2.5;
    CHECK_THROWS_AS(req.validate(), Error);
    req.temperature = 0.7;
    CHECK_NOTHROW(req.validate());
}

TEST_CASE("mock chat picks the first fixture in filename order") {
    TempDir dir("fixtures");
    write_file(dir.path() / "10_first.txt", "key: TESTBENCH\nmodule tb; endmodule\n");
    write_file(dir.path() / "20_second.txt", "key: TESTBENCH\nother reply\n");
    write_file(dir.path() / "30_other.txt", "key: REFINE\nrefined\n");
    MockGateway mock(dir.path());

    ChatRequest req;
    req.messages.push_back({"user", "please produce a TESTBENCH for this"});
    CHECK(mock.chat(req) == "module tb; endmodule\n");

    ChatRequest req2;
    req2.messages.push_back({"user", "now REFINE the code"});
    CHECK(mock.chat(req2) == "refined\n");
}

TEST_CASE("mock chat is deterministic and errors without a match") {
    TempDir dir("fixtures");
    write_file(dir.path() / "a.txt", "key: HELLO\nworld\n");
    MockGateway mock(dir.path());

    ChatRequest req;
    req.messages.push_back({"user", "HELLO there"});
    req.temperature = 0.0;
    CHECK(mock.chat(req) == mock.chat(req));

    ChatRequest miss;
    miss.messages.push_back({"user", "no fixture covers this"});
    CHECK_THROWS_AS(mock.chat(miss), GatewayError);
}

TEST_CASE("mock embeddings are deterministic, normalized, and order-preserving") {
    MockGateway mock;
    auto a = mock.embed({"an 8 bit adder"});
    auto b = mock.embed({"an 8 bit adder"});
    CHECK(a[0].values == b[0].values);
    CHECK(a[0].dim() == 8);
    CHECK(std::fabs(l2_norm(a[0]) - 1.0) <= 1e-6);

    auto batch = mock.embed({"one", "two", "three"});
    REQUIRE(batch.size() == 3);
    CHECK(batch[0].values == mock.embed({"one"})[0].values);
    CHECK(batch[2].values == mock.embed({"three"})[0].values);
    CHECK(batch[0].values != batch[1].values);
}

TEST_CASE("empty text embeds as the single-space placeholder") {
    MockGateway mock;
    auto vecs = mock.embed({"", " "});
    CHECK(vecs[0].values == vecs[1].values);
}

TEST_CASE("gateway normalization: raw [3,4,0,...] becomes [0.6,0.8,0,...]") {
    std::vector<double> v = {3.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    normalize_l2(v);
    CHECK(v[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(v[2] == 0.0);
}

TEST_CASE("gateway never returns unnormalized embeddings") {
    MockGateway mock;
    std::vector<std::string> texts;
    for (int i = 0; i < 50; ++i) texts.push_back("text number " + std::to_string(i));
    for (const auto& v : mock.embed(texts)) CHECK(std::fabs(l2_norm(v) - 1.0) <= 1e-6);
}

TEST_CASE("mock rerank scores by shared distinct tokens") {
    MockGateway mock;
    // query {adder, 8, bit}: passage 0 shares all three, passage 1 shares none
    auto scores = mock.rerank("adder 8 bit", {"an 8 bit adder", "a fifo"});
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].candidate_index == 0);
    CHECK(scores[0].score == 3.0);
    CHECK(scores[1].candidate_index == 1);
    CHECK(scores[1].score == 0.0);
}

TEST_CASE("single passage reranks to a single score") {
    MockGateway mock;
    auto scores = mock.rerank("anything", {"anything else"});
    REQUIRE(scores.size() == 1);
    CHECK(scores[0].candidate_index == 0);
}

TEST_CASE("equal rerank scores order by ascending candidate index") {
    MockGateway mock;
    auto scores = mock.rerank("zzz", {"aaa", "bbb"}); // both score 0
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].candidate_index == 0);
    CHECK(scores[1].candidate_index == 1);
}

TEST_CASE("rerank output is a permutation of input indices") {
    MockGateway mock;
    std::vector<std::string> passages;
    for (int i = 0; i < 20; ++i)
        passages.push_back("passage " + std::to_string(i) + (i % 3 ? " adder" : " fifo"));
    auto scores = mock.rerank("adder design", passages);
    std::vector<bool> seen(passages.size(), false);
    for (const auto& s : scores) {
        REQUIRE(s.candidate_index >= 0);
        REQUIRE(s.candidate_index < static_cast<int>(passages.size()));
        CHECK_FALSE(seen[static_cast<size_t>(s.candidate_index)]);
        seen[static_cast<size_t>(s.candidate_index)] = true;
    }
}

TEST_CASE("embed rejects an empty batch") {
    MockGateway mock;
    CHECK_THROWS_AS(mock.embed({}), Error);
    CHECK_THROWS_AS(mock.rerank("q", {}), Error);
}

namespace {

// Backend that violates the batch-dimension contract.
class RaggedGateway : public ModelGateway {
public:
    bool rerank_available() const override { return false; }

protected:
    std::string chat_impl(const ChatRequest&) override { return ""; }
    std::vector<std::vector<double>> embed_impl(const std::vector<std::string>& t) override {
        std::vector<std::vector<double>> out;
        for (size_t i = 0; i < t.size(); ++i)
            out.push_back(std::vector<double>(i + 2, 1.0)); // growing dims
        return out;
    }
    std::vector<RerankScore> rerank_impl(const std::string&,
                                         const std::vector<std::string>&) override {
        return {};
    }
};

} // namespace

TEST_CASE("dim mismatch across a batch is fatal") {
    RaggedGateway ragged;
    CHECK_THROWS_WITH_AS(ragged.embed({"one", "two"}),
                         doctest::Contains("inconsistent embedding dimension"), Error);
}
