#pragma once

#include "hdlcore/gateway.hpp"
#include "hdlcore/task.hpp"
#include "hdlcore/vindex.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hdlcore {

struct RetrievalParams {
    int k = 10; // stage-1 size per component
    int n = 2;  // final exemplar count

    void validate() const; // k >= 1, n >= 1, n <= 3k
};

struct Stage1Candidate {
    std::int64_t record_id = 0;
    ComponentScore scores;
};

struct Exemplar {
    std::int64_t record_id = 0;
    std::string instruction;
    std::string code;
    ComponentScore stage1_scores;
    double rerank_score = 0.0;
};

struct RetrievalResult {
    std::vector<Exemplar> exemplars;
    bool rerank_used = true; // false when stage 2 degraded to stage-1 ordering
};

// Stage 1: embeds the task components, scores every record, takes the top-k per
// component, and unions the three lists (dedup by record id). Candidates are
// ordered by descending max component score, ties by ascending id. At most 3k.
std::vector<Stage1Candidate> stage1_filter(const VectorIndex& index,
                                           const KeyComponents& task_components,
                                           const RetrievalParams& params,
                                           ModelGateway& gateway);

// Stage 2: re-ranks the candidates' full instruction text against the task
// instruction and keeps the top-n (ties by ascending record id). Falls back to
// stage-1 ordering when no reranker is available.
RetrievalResult stage2_rerank(const std::vector<Stage1Candidate>& candidates,
                              const Corpus& corpus, const std::string& task_instruction,
                              const RetrievalParams& params, ModelGateway& gateway);

RetrievalResult retrieve(const LoadedIndex& loaded, const TaskDescription& task,
                         const RetrievalParams& params, ModelGateway& gateway);

} // namespace hdlcore
