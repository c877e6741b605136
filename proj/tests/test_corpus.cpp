#include "doctest.h"

#include "hdlcore/corpus.hpp"
#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <json.hpp>

#include <fstream>

using namespace hdlcore;
using nlohmann::json;

namespace {

std::string record_line(const std::string& instruction, const std::string& code,
                        const std::string& source = "") {
    json j{{"instruction", instruction}, {"code", code}};
    if (!source.empty()) j["source"] = source;
    return j.dump() + "\n";
}

std::string filler(char c, size_t len) { return std::string(len, c); }

} // namespace

TEST_CASE("exact duplicates across files are dropped keeping the first") {
    TempDir dir("corpus");
    std::string shared = record_line("design an 8-bit adder circuit",
                                     "module adder(input a, output b); endmodule", "ds1");
    write_file(dir.path() / "a.jsonl",
               shared + record_line("design a 4-bit counter with clk input",
                                    "module counter(input clk); endmodule"));
    write_file(dir.path() / "b.jsonl",
               shared + record_line("design a comparator for two buses",
                                    "module cmp(input x, output y); endmodule"));

    IngestStats stats;
    auto corpus = ingest({(dir.path() / "a.jsonl").string(), (dir.path() / "b.jsonl").string()},
                         IngestFilters{}, &stats);
    CHECK(corpus.size() == 3);
    CHECK(stats.duplicates == 1);
    for (size_t i = 0; i < corpus.size(); ++i)
        CHECK(corpus[i].id == static_cast<std::int64_t>(i));
    // source defaults to the input file stem
    CHECK(corpus[0].source_tag == "ds1");
    CHECK(corpus[1].source_tag == "a");
}

TEST_CASE("records failing filters are skipped and counted") {
    TempDir dir("corpus");
    write_file(dir.path() / "in.jsonl",
               record_line("long enough instruction text", "") +
                   record_line("another fine instruction here",
                               "module ok(input a, output b); endmodule"));
    IngestStats stats;
    auto corpus = ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{}, &stats);
    CHECK(corpus.size() == 1);
    CHECK(stats.filtered == 1);
}

TEST_CASE("malformed lines are skipped and counted") {
    TempDir dir("corpus");
    write_file(dir.path() / "in.jsonl",
               "this is not json\n{\"instruction\": 7, \"code\": \"x\"}\n" +
                   record_line("a valid instruction record here",
                               "module ok(input a, output b); endmodule"));
    IngestStats stats;
    auto corpus = ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{}, &stats);
    CHECK(corpus.size() == 1);
    CHECK(stats.malformed == 2);
}

TEST_CASE("100 synthetic records with 10 short instructions leaves ids 0..89") {
    TempDir dir("corpus");
    std::string content;
    int expected_drops = 0; // independent count while writing the file
    for (int i = 0; i < 100; ++i) {
        std::string instruction;
        if (i % 10 == 3) {
            instruction = "short #" + std::to_string(i); // < 20 chars
            ++expected_drops;
        } else {
            instruction = "synthetic instruction number " + std::to_string(i) +
                          " describing a small design";
        }
        content += record_line(instruction, "module m" + std::to_string(i) +
                                                "(input a, output b); endmodule");
    }
    write_file(dir.path() / "in.jsonl", content);
    CHECK(expected_drops == 10);

    IngestFilters filters;
    filters.min_instruction_len = 20;
    IngestStats stats;
    auto corpus = ingest({(dir.path() / "in.jsonl").string()}, filters, &stats);
    CHECK(corpus.size() == 90);
    CHECK(stats.filtered == 10);
    for (size_t i = 0; i < corpus.size(); ++i)
        CHECK(corpus[i].id == static_cast<std::int64_t>(i));
}

TEST_CASE("ingest is deterministic") {
    TempDir dir("corpus");
    write_file(dir.path() / "in.jsonl",
               record_line("instruction alpha for the first", filler('a', 40)) +
                   record_line("instruction beta for the second", filler('b', 40)));
    auto first = ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{});
    auto second = ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{});
    CHECK(first == second);

    save_corpus(first, (dir.path() / "c1.jsonl").string());
    save_corpus(second, (dir.path() / "c2.jsonl").string());
    CHECK(read_file(dir.path() / "c1.jsonl") == read_file(dir.path() / "c2.jsonl"));
}

TEST_CASE("unreadable input is fatal with the path in the message") {
    CHECK_THROWS_WITH_AS(ingest({"/nonexistent/input.jsonl"}, IngestFilters{}),
                         doctest::Contains("/nonexistent/input.jsonl"), Error);
}

TEST_CASE("zero surviving records is fatal") {
    TempDir dir("corpus");
    write_file(dir.path() / "in.jsonl", record_line("tiny", "x"));
    CHECK_THROWS_AS(ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{}), Error);
}

TEST_CASE("dedup can be disabled") {
    TempDir dir("corpus");
    std::string line = record_line("the same instruction both times",
                                   "module s(input a, output b); endmodule");
    write_file(dir.path() / "in.jsonl", line + line);
    IngestFilters filters;
    filters.dedup = false;
    auto corpus = ingest({(dir.path() / "in.jsonl").string()}, filters);
    CHECK(corpus.size() == 2);
}

TEST_CASE("save/load round trip reproduces the corpus exactly") {
    TempDir dir("corpus");
    write_file(dir.path() / "in.jsonl",
               record_line("unicode instruction: ein 8-bit Zähler für μs",
                           "module z(input clk, output [7:0] q); endmodule") +
                   record_line("plain ascii instruction text",
                               "module p(input a, output b); endmodule"));
    auto corpus = ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{});
    save_corpus(corpus, (dir.path() / "out.jsonl").string());
    auto loaded = load_corpus((dir.path() / "out.jsonl").string());
    CHECK(loaded == corpus);
    CHECK(loaded[0].instruction == corpus[0].instruction); // byte-equal unicode
}

TEST_CASE("saving an empty corpus is refused") {
    TempDir dir("corpus");
    CHECK_THROWS_AS(save_corpus({}, (dir.path() / "out.jsonl").string()), Error);
}

TEST_CASE("duplicate or gapped ids on load are corrupt") {
    TempDir dir("corpus");
    auto make_line = [](int id) {
        json j{{"id", id},
               {"instruction", "instruction text long enough"},
               {"code", "module m(input a, output b); endmodule"},
               {"source", "s"},
               {"components",
                {{"high_level", "h"}, {"low_level", "l"}, {"module_header", ""}}}};
        return j.dump() + "\n";
    };
    write_file(dir.path() / "dup.jsonl", make_line(0) + make_line(5));
    CHECK_THROWS_WITH_AS(load_corpus((dir.path() / "dup.jsonl").string()),
                         doctest::Contains("corrupt corpus"), Error);
    write_file(dir.path() / "dup2.jsonl", make_line(0) + make_line(0));
    CHECK_THROWS_WITH_AS(load_corpus((dir.path() / "dup2.jsonl").string()),
                         doctest::Contains("corrupt corpus"), Error);
}

TEST_CASE("components come from the extractor over instruction and code") {
    TempDir dir("corpus");
    write_file(dir.path() / "in.jsonl",
               record_line("An 8-bit adder.\n\nIt adds a and b.",
                           "module adder(input [7:0] a, input [7:0] b, "
                           "output [8:0] s); endmodule"));
    auto corpus = ingest({(dir.path() / "in.jsonl").string()}, IngestFilters{});
    REQUIRE(corpus.size() == 1);
    CHECK(corpus[0].components ==
          extract_components(corpus[0].instruction, &corpus[0].code));
    CHECK(corpus[0].components.module_header.starts_with("module adder("));
}
