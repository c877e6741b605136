#pragma once

#include "hdlcore/corpus.hpp"
#include "hdlcore/gateway.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hdlcore {

enum class Component { HighLevel, LowLevel, ModuleHeader };

// Three aligned matrices of unit-norm embeddings, row i = corpus record id i.
struct VectorIndex {
    int dim = 0;
    std::int64_t count = 0;
    std::string embed_model;
    std::vector<float> hl, ll, mh; // row-major count x dim

    std::span<const float> row(Component c, std::int64_t i) const;
};

struct ComponentScore {
    std::int64_t record_id = 0;
    double s_hl = 0.0, s_ll = 0.0, s_mh = 0.0;

    double get(Component c) const;
    double max_score() const;
};

// Embeds every record's three components (batched) and assembles the index.
VectorIndex build_index(const Corpus& corpus, ModelGateway& gateway,
                        const std::string& embed_model = "", int batch_size = 64);

// Cosine scores of the query components against every record, ordered by record id.
std::vector<ComponentScore> score_all(const VectorIndex& index, const EmbeddingVector& q_hl,
                                      const EmbeddingVector& q_ll, const EmbeddingVector& q_mh);

// Ids of the k best scores for one component: descending score, ties by ascending id.
std::vector<std::int64_t> top_k(const std::vector<ComponentScore>& scores, Component c, int k);

// Directory layout: meta.json, hl.f32 / ll.f32 / mh.f32 (row-major little-endian
// 32-bit floats), records.jsonl (the corpus the index was built from).
void save_index(const VectorIndex& index, const Corpus& corpus, const std::string& dir);

struct LoadedIndex {
    VectorIndex index;
    Corpus corpus;
};

LoadedIndex load_index(const std::string& dir);

} // namespace hdlcore
