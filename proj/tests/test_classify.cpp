#include "doctest.h"

#include "hdlcore/classify.hpp"
#include "hdlcore/util.hpp"

using namespace hdlcore;

namespace {

TaskDescription task_of(const std::string& text) {
    TaskDescription t;
    t.raw_text = text;
    t.name = "t";
    return t;
}

MockGateway mock_with(const std::string& reply) {
    static int counter = 0;
    static std::vector<std::unique_ptr<TempDir>> keep;
    keep.push_back(std::make_unique<TempDir>("clsfx"));
    auto& dir = *keep.back();
    write_file(dir.path() / ("f" + std::to_string(counter++) + ".txt"),
               "key: Task under assessment:\n" + reply);
    return MockGateway(dir.path());
}

} // namespace

TEST_CASE("temporal keywords imply Sequential") {
    ClassifierConfig cfg;
    CHECK(classify_logic(task_of("a counter driven by clk with async reset"), cfg) ==
          LogicType::Sequential);
    CHECK(classify_logic(task_of("An 8-bit adder"), cfg) == LogicType::Combinational);
}

TEST_CASE("the word combinational overrides temporal hits") {
    ClassifierConfig cfg;
    CHECK(classify_logic(task_of("purely combinational decoder sampled each cycle"), cfg) ==
          LogicType::Combinational);
}

TEST_CASE("classify_logic is pure") {
    ClassifierConfig cfg;
    auto t = task_of("fsm with clk");
    CHECK(classify_logic(t, cfg) == classify_logic(t, cfg));
}

TEST_CASE("complexity parses the first SIMPLE/COMPLEX occurrence") {
    auto catalog = PromptCatalog::builtin();
    ClassifierConfig cfg;

    auto complex_mock = mock_with("COMPLEX — multiple pipeline stages");
    auto r1 = assess_complexity(task_of("a big design"), catalog, complex_mock, cfg);
    CHECK(r1.value == Complexity::Complex);
    CHECK_FALSE(r1.parse_failed);

    auto simple_mock = mock_with("simple");
    auto r2 = assess_complexity(task_of("a tiny design"), catalog, simple_mock, cfg);
    CHECK(r2.value == Complexity::Simple);
    CHECK_FALSE(r2.parse_failed);

    auto both_mock = mock_with("It looks simple, not complex.");
    auto r3 = assess_complexity(task_of("a design"), catalog, both_mock, cfg);
    CHECK(r3.value == Complexity::Simple); // "simple" occurs first
}

TEST_CASE("unparseable complexity reply falls back to the default and is flagged") {
    auto catalog = PromptCatalog::builtin();
    ClassifierConfig cfg;
    auto mock = mock_with("maybe");
    auto r = assess_complexity(task_of("a design"), catalog, mock, cfg);
    CHECK(r.value == Complexity::Complex);
    CHECK(r.parse_failed);

    cfg.complexity_default = Complexity::Simple;
    auto mock2 = mock_with("maybe");
    auto r2 = assess_complexity(task_of("a design"), catalog, mock2, cfg);
    CHECK(r2.value == Complexity::Simple);
}

TEST_CASE("classification composes into the four labels") {
    auto catalog = PromptCatalog::builtin();
    ClassifierConfig cfg;

    struct Case {
        const char* text;
        const char* reply;
        const char* label;
    };
    const Case cases[] = {
        {"a counter with clk and reset inputs", "SIMPLE", "SS-HDL"},
        {"a 64-bit pipeline adder advancing on clk", "COMPLEX", "CS-HDL"},
        {"a comparator of two unsigned numbers", "SIMPLE", "SC-HDL"},
        {"a combinational 32-bit ALU with many operations", "COMPLEX", "CC-HDL"},
    };
    for (const auto& c : cases) {
        auto mock = mock_with(c.reply);
        auto result = classify(task_of(c.text), catalog, mock, cfg);
        CHECK(result.cls.label() == c.label);
    }
}

TEST_CASE("classify surfaces matched keywords and the override flag") {
    auto catalog = PromptCatalog::builtin();
    ClassifierConfig cfg;
    auto mock = mock_with("SIMPLE");
    auto result =
        classify(task_of("combinational mux evaluated each cycle"), catalog, mock, cfg);
    CHECK(result.combinational_override);
    CHECK(result.matched_keywords == std::vector<std::string>{"cycle"});
    CHECK(result.cls.logic == LogicType::Combinational);
}

TEST_CASE("classify logs the prompt exchange") {
    auto catalog = PromptCatalog::builtin();
    ClassifierConfig cfg;
    auto mock = mock_with("SIMPLE");
    PhaseLog log;
    classify(task_of("an adder"), catalog, mock, cfg, &log);
    REQUIRE(log.size() == 1);
    CHECK(log[0].phase == "classify");
    CHECK(log[0].user_prompt.find("an adder") != std::string::npos);
    CHECK(log[0].reply == "SIMPLE");
}

TEST_CASE("label derivation covers the full product") {
    CHECK(TaskClass{LogicType::Combinational, Complexity::Simple}.label() == "SC-HDL");
    CHECK(TaskClass{LogicType::Sequential, Complexity::Simple}.label() == "SS-HDL");
    CHECK(TaskClass{LogicType::Combinational, Complexity::Complex}.label() == "CC-HDL");
    CHECK(TaskClass{LogicType::Sequential, Complexity::Complex}.label() == "CS-HDL");
}
