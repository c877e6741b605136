#include "doctest.h"

#include "hdlcore/errors.hpp"
#include "hdlcore/retrieve.hpp"
#include "hdlcore/util.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hdlcore;

namespace {

const char* kWords[] = {"adder", "fifo", "counter", "shifter", "decoder", "мультиплексор",
                        "alu", "register", "comparator", "encoder", "divider", "multiplier"};

Corpus random_corpus(std::mt19937& rng, int count) {
    Corpus corpus;
    for (int i = 0; i < count; ++i) {
        CorpusRecord r;
        r.id = i;
        std::string words;
        int n = 3 + static_cast<int>(rng() % 6);
        for (int w = 0; w < n; ++w) {
            words += kWords[rng() % 12];
            words += ' ';
        }
        r.instruction = "design a " + words + "variant " + std::to_string(i);
        r.code = "module m" + std::to_string(i) + "(input a, output b); endmodule";
        r.source_tag = "rnd";
        r.components = extract_components(r.instruction, &r.code);
        corpus.push_back(std::move(r));
    }
    return corpus;
}

// Test-local reimplementation of the mock reranker's scoring rule: the number of
// distinct lowercase tokens shared between query and passage.
double oracle_overlap(const std::string& query, const std::string& passage) {
    auto tokens = [](const std::string& s) {
        std::set<std::string> out;
        std::string cur;
        for (char c : s) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            else if (!cur.empty()) {
                out.insert(cur);
                cur.clear();
            }
        }
        if (!cur.empty()) out.insert(cur);
        return out;
    };
    auto q = tokens(query);
    auto p = tokens(passage);
    int shared = 0;
    for (const auto& t : p)
        if (q.count(t)) ++shared;
    return shared;
}

// Brute-force oracle: rerank the whole corpus, sort (score desc, id asc), take n.
std::vector<std::int64_t> oracle_full_rerank(const Corpus& corpus, const std::string& task,
                                             int n) {
    std::vector<std::pair<double, std::int64_t>> scored;
    for (const auto& r : corpus) scored.push_back({oracle_overlap(task, r.instruction), r.id});
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::int64_t> ids;
    for (int i = 0; i < n && i < static_cast<int>(scored.size()); ++i)
        ids.push_back(scored[static_cast<size_t>(i)].second);
    return ids;
}

LoadedIndex make_loaded(const Corpus& corpus, MockGateway& mock) {
    LoadedIndex loaded;
    loaded.index = build_index(corpus, mock);
    loaded.corpus = corpus;
    return loaded;
}

} // namespace

TEST_CASE("retrieval params validation") {
    CHECK_THROWS_AS((RetrievalParams{0, 1}).validate(), Error);
    CHECK_THROWS_AS((RetrievalParams{1, 0}).validate(), Error);
    CHECK_THROWS_AS((RetrievalParams{1, 4}).validate(), Error); // n > 3k
    CHECK_NOTHROW((RetrievalParams{1, 3}).validate());
}

TEST_CASE("stage1 with k=1 unions the per-component winners") {
    std::mt19937 rng(123);
    MockGateway mock;
    auto corpus = random_corpus(rng, 12);
    auto loaded = make_loaded(corpus, mock);

    KeyComponents task{"some high level text", "some low level text", "module q(input a);"};
    auto candidates = stage1_filter(loaded.index, task, RetrievalParams{1, 1}, mock);

    // the union of the three k=1 winners, computed independently
    auto q = mock.embed({task.high_level, task.low_level, task.module_header});
    auto scores = score_all(loaded.index, q[0], q[1], q[2]);
    std::set<std::int64_t> expect;
    for (Component c : {Component::HighLevel, Component::LowLevel, Component::ModuleHeader})
        expect.insert(top_k(scores, c, 1)[0]);

    std::set<std::int64_t> got;
    for (const auto& c : candidates) got.insert(c.record_id);
    CHECK(got == expect);
    CHECK(candidates.size() <= 3);
}

TEST_CASE("stage1 dedups a record that wins every component") {
    MockGateway mock;
    Corpus corpus;
    CorpusRecord r;
    r.id = 0;
    r.instruction = "the only record in this corpus";
    r.code = "module only(input a); endmodule";
    r.components = extract_components(r.instruction, &r.code);
    corpus.push_back(r);
    auto loaded = make_loaded(corpus, mock);

    auto candidates =
        stage1_filter(loaded.index, corpus[0].components, RetrievalParams{1, 1}, mock);
    CHECK(candidates.size() == 1);
    CHECK(candidates[0].record_id == 0);
}

TEST_CASE("stage1 union matches brute-force per-component sort prefixes") {
    std::mt19937 rng(456);
    MockGateway mock;
    auto corpus = random_corpus(rng, 5);
    auto loaded = make_loaded(corpus, mock);

    KeyComponents task{"counter with clk", "increments each cycle", ""};
    RetrievalParams params{2, 2};
    auto candidates = stage1_filter(loaded.index, task, params, mock);

    auto q = mock.embed({task.high_level, task.low_level, task.module_header});
    auto scores = score_all(loaded.index, q[0], q[1], q[2]);
    std::set<std::int64_t> expect;
    for (Component c : {Component::HighLevel, Component::LowLevel, Component::ModuleHeader}) {
        // brute force: full sort on this component, prefix 2
        std::vector<std::pair<double, std::int64_t>> sorted;
        for (const auto& s : scores) sorted.push_back({s.get(c), s.record_id});
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        expect.insert(sorted[0].second);
        expect.insert(sorted[1].second);
    }
    std::set<std::int64_t> got;
    for (const auto& c : candidates) got.insert(c.record_id);
    CHECK(got == expect);

    // candidate order: descending max score, ties by ascending id
    for (size_t i = 1; i < candidates.size(); ++i) {
        double prev = candidates[i - 1].scores.max_score();
        double cur = candidates[i].scores.max_score();
        CHECK(prev >= cur);
        if (prev == cur) CHECK(candidates[i - 1].record_id < candidates[i].record_id);
    }
}

TEST_CASE("stage2 orders by mock scores and truncates to n") {
    MockGateway mock;
    std::mt19937 rng(789);
    auto corpus = random_corpus(rng, 6);
    auto loaded = make_loaded(corpus, mock);

    std::vector<Stage1Candidate> candidates;
    for (std::int64_t id : {1, 3, 5}) {
        Stage1Candidate c;
        c.record_id = id;
        c.scores.record_id = id;
        candidates.push_back(c);
    }

    std::string task = corpus[3].instruction; // maximal overlap with record 3
    auto result = stage2_rerank(candidates, loaded.corpus, task, RetrievalParams{10, 2}, mock);
    REQUIRE(result.exemplars.size() == 2);
    CHECK(result.rerank_used);
    CHECK(result.exemplars[0].record_id == 3);

    // n larger than the candidate set truncates
    auto all = stage2_rerank(candidates, loaded.corpus, task, RetrievalParams{10, 5}, mock);
    CHECK(all.exemplars.size() == 3);
}

TEST_CASE("stage2 tie-break is ascending record id") {
    MockGateway mock;
    Corpus corpus;
    for (int i = 0; i < 3; ++i) {
        CorpusRecord r;
        r.id = i;
        r.instruction = "identical instruction text each time";
        r.code = "module m(input a); endmodule";
        r.components = extract_components(r.instruction, &r.code);
        corpus.push_back(r);
    }
    std::vector<Stage1Candidate> candidates;
    for (std::int64_t id : {2, 0, 1}) { // deliberately shuffled submission order
        Stage1Candidate c;
        c.record_id = id;
        candidates.push_back(c);
    }
    auto result = stage2_rerank(candidates, corpus, "identical instruction text each time",
                                RetrievalParams{10, 3}, mock);
    REQUIRE(result.exemplars.size() == 3);
    CHECK(result.exemplars[0].record_id == 0);
    CHECK(result.exemplars[1].record_id == 1);
    CHECK(result.exemplars[2].record_id == 2);
}

TEST_CASE("stage2 degrades to stage-1 order when no reranker is available") {
    MockGateway mock;
    mock.set_rerank_available(false);
    std::mt19937 rng(31);
    auto corpus = random_corpus(rng, 4);

    std::vector<Stage1Candidate> candidates;
    for (std::int64_t id : {2, 0}) {
        Stage1Candidate c;
        c.record_id = id;
        c.scores.s_hl = id == 2 ? 0.9 : 0.1;
        candidates.push_back(c);
    }
    auto result = stage2_rerank(candidates, corpus, "whatever", RetrievalParams{10, 2}, mock);
    CHECK_FALSE(result.rerank_used);
    REQUIRE(result.exemplars.size() == 2);
    CHECK(result.exemplars[0].record_id == 2);
    CHECK(result.exemplars[0].rerank_score == doctest::Approx(0.9));
}

TEST_CASE("retrieve with k >= corpus size equals brute-force rerank of everything") {
    std::mt19937 rng(2025);
    MockGateway mock;
    auto corpus = random_corpus(rng, 30);
    auto loaded = make_loaded(corpus, mock);

    TaskDescription task;
    task.raw_text = "design a counter adder hybrid variant 7";
    task.name = "t";

    for (int n : {1, 2, 5}) {
        auto result = retrieve(loaded, task, RetrievalParams{30, n}, mock);
        auto expect = oracle_full_rerank(corpus, task.raw_text, n);
        REQUIRE(result.exemplars.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i)
            CHECK(result.exemplars[i].record_id == expect[i]);
    }
}

TEST_CASE("corpus of one record retrieves that record") {
    MockGateway mock;
    Corpus corpus;
    CorpusRecord r;
    r.id = 0;
    r.instruction = "the lone instruction in the corpus";
    r.code = "module lone(input a); endmodule";
    r.components = extract_components(r.instruction, &r.code);
    corpus.push_back(r);
    auto loaded = make_loaded(corpus, mock);

    TaskDescription task;
    task.raw_text = "anything goes here";
    auto result = retrieve(loaded, task, RetrievalParams{10, 2}, mock);
    REQUIRE(result.exemplars.size() == 1);
    CHECK(result.exemplars[0].record_id == 0);
}

TEST_CASE("a task equal to a record's instruction ranks that record first") {
    std::mt19937 rng(99);
    MockGateway mock;
    auto corpus = random_corpus(rng, 15);
    auto loaded = make_loaded(corpus, mock);

    TaskDescription task;
    task.raw_text = corpus[7].instruction;
    auto result = retrieve(loaded, task, RetrievalParams{15, 1}, mock);
    REQUIRE(result.exemplars.size() == 1);
    CHECK(result.exemplars[0].record_id == 7);
}

TEST_CASE("retrieve is deterministic under the mock gateway") {
    std::mt19937 rng(5);
    MockGateway mock;
    auto corpus = random_corpus(rng, 10);
    auto loaded = make_loaded(corpus, mock);
    TaskDescription task;
    task.raw_text = "registers and shifters";

    auto a = retrieve(loaded, task, RetrievalParams{4, 2}, mock);
    auto b = retrieve(loaded, task, RetrievalParams{4, 2}, mock);
    REQUIRE(a.exemplars.size() == b.exemplars.size());
    for (size_t i = 0; i < a.exemplars.size(); ++i) {
        CHECK(a.exemplars[i].record_id == b.exemplars[i].record_id);
        CHECK(a.exemplars[i].rerank_score == b.exemplars[i].rerank_score);
    }
}

TEST_CASE("stage1 candidate set is invariant to component union order") {
    // the set-based union makes order irrelevant by construction; this pins the
    // bound |stage1| <= 3k and the subset relation against per-component sorts
    std::mt19937 rng(8);
    MockGateway mock;
    auto corpus = random_corpus(rng, 25);
    auto loaded = make_loaded(corpus, mock);

    KeyComponents task{"adder", "carry chain", "module a(input x);"};
    for (int k : {1, 2, 5, 25}) {
        auto candidates = stage1_filter(loaded.index, task, RetrievalParams{k, 1}, mock);
        CHECK(candidates.size() <= static_cast<size_t>(3 * k));

        auto q = mock.embed({task.high_level, task.low_level, task.module_header});
        auto scores = score_all(loaded.index, q[0], q[1], q[2]);
        std::set<std::int64_t> expect;
        for (Component c :
             {Component::HighLevel, Component::LowLevel, Component::ModuleHeader})
            for (auto id : top_k(scores, c, k)) expect.insert(id);
        std::set<std::int64_t> got;
        for (const auto& c : candidates) got.insert(c.record_id);
        CHECK(got == expect);
    }
}
