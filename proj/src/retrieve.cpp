#include "hdlcore/retrieve.hpp"

#include "hdlcore/errors.hpp"

#include <algorithm>
#include <set>

namespace hdlcore {

void RetrievalParams::validate() const {
    if (k < 1) throw Error("retrieval k must be >= 1");
    if (n < 1) throw Error("retrieval n must be >= 1");
    if (n > 3 * k)
        throw Error("retrieval n (" + std::to_string(n) + ") exceeds 3k (" +
                    std::to_string(3 * k) + ")");
}

std::vector<Stage1Candidate> stage1_filter(const VectorIndex& index,
                                           const KeyComponents& task_components,
                                           const RetrievalParams& params,
                                           ModelGateway& gateway) {
    params.validate();

    auto query = gateway.embed({task_components.high_level, task_components.low_level,
                                task_components.module_header});
    auto scores = score_all(index, query[0], query[1], query[2]);

    std::set<std::int64_t> selected;
    for (Component c : {Component::HighLevel, Component::LowLevel, Component::ModuleHeader})
        for (std::int64_t id : top_k(scores, c, params.k)) selected.insert(id);

    std::vector<Stage1Candidate> candidates;
    candidates.reserve(selected.size());
    for (std::int64_t id : selected)
        candidates.push_back(Stage1Candidate{id, scores[static_cast<size_t>(id)]});

    std::sort(candidates.begin(), candidates.end(),
              [](const Stage1Candidate& a, const Stage1Candidate& b) {
                  double ma = a.scores.max_score(), mb = b.scores.max_score();
                  if (ma != mb) return ma > mb;
                  return a.record_id < b.record_id;
              });
    return candidates;
}

RetrievalResult stage2_rerank(const std::vector<Stage1Candidate>& candidates,
                              const Corpus& corpus, const std::string& task_instruction,
                              const RetrievalParams& params, ModelGateway& gateway) {
    params.validate();
    if (candidates.empty()) throw Error("stage-2 rerank requires at least one candidate");

    auto make_exemplar = [&](const Stage1Candidate& c, double rerank_score) {
        const auto& rec = corpus.at(static_cast<size_t>(c.record_id));
        Exemplar e;
        e.record_id = c.record_id;
        e.instruction = rec.instruction;
        e.code = rec.code;
        e.stage1_scores = c.scores;
        e.rerank_score = rerank_score;
        return e;
    };

    RetrievalResult result;
    size_t want = std::min<size_t>(candidates.size(), static_cast<size_t>(params.n));

    if (!gateway.rerank_available()) {
        result.rerank_used = false;
        for (size_t i = 0; i < want; ++i)
            result.exemplars.push_back(
                make_exemplar(candidates[i], candidates[i].scores.max_score()));
        return result;
    }

    std::vector<std::string> passages;
    passages.reserve(candidates.size());
    for (const auto& c : candidates)
        passages.push_back(corpus.at(static_cast<size_t>(c.record_id)).instruction);

    auto scored = gateway.rerank(task_instruction, passages);
    // ties resolve by ascending record id, not by submission position
    std::sort(scored.begin(), scored.end(), [&](const RerankScore& a, const RerankScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return candidates[static_cast<size_t>(a.candidate_index)].record_id <
               candidates[static_cast<size_t>(b.candidate_index)].record_id;
    });

    result.rerank_used = true;
    for (size_t i = 0; i < want; ++i) {
        const auto& rs = scored[i];
        result.exemplars.push_back(
            make_exemplar(candidates[static_cast<size_t>(rs.candidate_index)], rs.score));
    }
    return result;
}

RetrievalResult retrieve(const LoadedIndex& loaded, const TaskDescription& task,
                         const RetrievalParams& params, ModelGateway& gateway) {
    auto candidates = stage1_filter(loaded.index, task.components(), params, gateway);
    return stage2_rerank(candidates, loaded.corpus, task.raw_text, params, gateway);
}

} // namespace hdlcore
