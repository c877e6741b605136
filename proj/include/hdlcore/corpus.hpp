#pragma once

#include "hdlcore/hdl_extract.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hdlcore {

struct CorpusRecord {
    std::int64_t id = 0;
    std::string instruction;
    std::string code;
    std::string source_tag;
    KeyComponents components;

    bool operator==(const CorpusRecord&) const = default;
};

using Corpus = std::vector<CorpusRecord>;

struct IngestFilters {
    std::size_t min_instruction_len = 20;
    std::size_t max_instruction_len = 32768;
    std::size_t min_code_len = 20;
    std::size_t max_code_len = 32768;
    bool dedup = true;
};

struct IngestStats {
    std::size_t lines_read = 0;
    std::size_t malformed = 0;
    std::size_t filtered = 0;
    std::size_t duplicates = 0;
};

// Reads line-delimited records ({"instruction", "code", optional "source"}) from
// each input in order, applies the filters, drops exact duplicate
// (instruction, code) pairs keeping the first occurrence, and assigns dense ids.
// Components are populated from each record via the extractor.
Corpus ingest(const std::vector<std::string>& input_paths, const IngestFilters& filters,
              IngestStats* stats = nullptr);

void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

} // namespace hdlcore
