#include "hdlcore/corpus.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <unordered_set>

namespace hdlcore {

namespace {

using nlohmann::json;

// Injective key over the (instruction, code) pair.
std::string dedup_key(const std::string& instruction, const std::string& code) {
    return std::to_string(instruction.size()) + "#" + instruction + code;
}

json record_to_json(const CorpusRecord& r) {
    return json{
        {"id", r.id},
        {"instruction", r.instruction},
        {"code", r.code},
        {"source", r.source_tag},
        {"components",
         {{"high_level", r.components.high_level},
          {"low_level", r.components.low_level},
          {"module_header", r.components.module_header}}},
    };
}

} // namespace

Corpus ingest(const std::vector<std::string>& input_paths, const IngestFilters& filters,
              IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;
    st = IngestStats{};

    Corpus corpus;
    std::unordered_set<std::string> seen;

    for (const auto& path : input_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot read input file: " + path);
        std::string default_source = std::filesystem::path(path).stem().string();

        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty()) continue;
            ++st.lines_read;

            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("instruction") ||
                !j.contains("code") || !j["instruction"].is_string() ||
                !j["code"].is_string()) {
                ++st.malformed;
                continue;
            }

            std::string instruction = trim(j["instruction"].get<std::string>());
            std::string code = trim(j["code"].get<std::string>());
            std::string source = default_source;
            if (j.contains("source") && j["source"].is_string())
                source = j["source"].get<std::string>();

            if (instruction.size() < filters.min_instruction_len ||
                instruction.size() > filters.max_instruction_len ||
                code.size() < filters.min_code_len || code.size() > filters.max_code_len) {
                ++st.filtered;
                continue;
            }

            if (filters.dedup && !seen.insert(dedup_key(instruction, code)).second) {
                ++st.duplicates;
                continue;
            }

            CorpusRecord r;
            r.id = static_cast<std::int64_t>(corpus.size());
            r.instruction = std::move(instruction);
            r.code = std::move(code);
            r.source_tag = std::move(source);
            r.components = extract_components(r.instruction, &r.code);
            corpus.push_back(std::move(r));
        }
        if (in.bad()) throw Error("read failure on input file: " + path);
    }

    if (corpus.empty()) throw Error("no records survived ingestion");
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    if (corpus.empty()) throw Error("refusing to save an empty corpus");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write corpus file: " + path);
    for (const auto& r : corpus) {
        out << record_to_json(r).dump() << '\n';
    }
    if (!out) throw Error("write failure on corpus file: " + path);
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read corpus file: " + path);

    Corpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++line_no;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw Error("corrupt corpus: unparseable line " + std::to_string(line_no) +
                        " in " + path);
        try {
            CorpusRecord r;
            r.id = j.at("id").get<std::int64_t>();
            r.instruction = j.at("instruction").get<std::string>();
            r.code = j.at("code").get<std::string>();
            r.source_tag = j.at("source").get<std::string>();
            const auto& c = j.at("components");
            r.components.high_level = c.at("high_level").get<std::string>();
            r.components.low_level = c.at("low_level").get<std::string>();
            r.components.module_header = c.at("module_header").get<std::string>();
            corpus.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error("corrupt corpus: line " + std::to_string(line_no) + " in " + path +
                        ": " + e.what());
        }
    }
    if (in.bad()) throw Error("read failure on corpus file: " + path);
    if (corpus.empty()) throw Error("corrupt corpus: no records in " + path);

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus[i].id != static_cast<std::int64_t>(i))
            throw Error("corrupt corpus: expected id " + std::to_string(i) + ", found " +
                        std::to_string(corpus[i].id) + " in " + path);
    }
    return corpus;
}

} // namespace hdlcore
