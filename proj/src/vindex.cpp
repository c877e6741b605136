#include "hdlcore/vindex.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace hdlcore {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

// Casts to float then renormalizes so the stored row is unit-norm in f32.
void append_row(std::vector<float>& matrix, const EmbeddingVector& v) {
    size_t base = matrix.size();
    for (double x : v.values) matrix.push_back(static_cast<float>(x));
    double sq = 0.0;
    for (size_t i = base; i < matrix.size(); ++i) sq += double(matrix[i]) * matrix[i];
    double norm = std::sqrt(sq);
    if (norm < 1e-12) {
        matrix[base] = 1.0f;
        for (size_t i = base + 1; i < matrix.size(); ++i) matrix[i] = 0.0f;
        return;
    }
    for (size_t i = base; i < matrix.size(); ++i)
        matrix[i] = static_cast<float>(matrix[i] / norm);
}

void write_f32_le(const std::filesystem::path& path, const std::vector<float>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index file: " + path.string());
    for (float f : data) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
        char bytes[4] = {
            static_cast<char>(bits & 0xFF),
            static_cast<char>((bits >> 8) & 0xFF),
            static_cast<char>((bits >> 16) & 0xFF),
            static_cast<char>((bits >> 24) & 0xFF),
        };
        out.write(bytes, 4);
    }
    if (!out) throw Error("write failure on index file: " + path.string());
}

std::vector<float> read_f32_le(const std::filesystem::path& path, size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read index file: " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() != expected * 4)
        throw Error("corrupt index: " + path.string() + " has " + std::to_string(raw.size()) +
                    " bytes, expected " + std::to_string(expected * 4));
    std::vector<float> data(expected);
    for (size_t i = 0; i < expected; ++i) {
        std::uint32_t bits = static_cast<unsigned char>(raw[4 * i]) |
                             (static_cast<std::uint32_t>(static_cast<unsigned char>(raw[4 * i + 1])) << 8) |
                             (static_cast<std::uint32_t>(static_cast<unsigned char>(raw[4 * i + 2])) << 16) |
                             (static_cast<std::uint32_t>(static_cast<unsigned char>(raw[4 * i + 3])) << 24);
        data[i] = std::bit_cast<float>(bits);
    }
    return data;
}

void check_rows_unit_norm(const std::vector<float>& m, std::int64_t count, int dim,
                          const char* which) {
    for (std::int64_t i = 0; i < count; ++i) {
        double sq = 0.0;
        for (int d = 0; d < dim; ++d) {
            double v = m[static_cast<size_t>(i) * dim + d];
            sq += v * v;
        }
        if (std::fabs(std::sqrt(sq) - 1.0) > 1e-6)
            throw Error(std::string("corrupt index: non-unit row ") + std::to_string(i) +
                        " in " + which);
    }
}

double dot(std::span<const float> row, const std::vector<double>& q) {
    double s = 0.0;
    for (size_t i = 0; i < row.size(); ++i) s += double(row[i]) * q[i];
    return s;
}

} // namespace

std::span<const float> VectorIndex::row(Component c, std::int64_t i) const {
    const std::vector<float>* m = &hl;
    if (c == Component::LowLevel) m = &ll;
    else if (c == Component::ModuleHeader) m = &mh;
    return std::span<const float>(m->data() + static_cast<size_t>(i) * dim,
                                  static_cast<size_t>(dim));
}

double ComponentScore::get(Component c) const {
    switch (c) {
        case Component::HighLevel: return s_hl;
        case Component::LowLevel: return s_ll;
        case Component::ModuleHeader: return s_mh;
    }
    return s_hl;
}

double ComponentScore::max_score() const { return std::max({s_hl, s_ll, s_mh}); }

VectorIndex build_index(const Corpus& corpus, ModelGateway& gateway,
                        const std::string& embed_model, int batch_size) {
    if (corpus.empty()) throw Error("cannot build an index over an empty corpus");
    if (batch_size <= 0) throw Error("batch size must be positive");

    VectorIndex index;
    index.count = static_cast<std::int64_t>(corpus.size());
    index.embed_model = embed_model;

    auto embed_all = [&](auto select) {
        std::vector<EmbeddingVector> rows;
        rows.reserve(corpus.size());
        for (size_t b = 0; b < corpus.size(); b += static_cast<size_t>(batch_size)) {
            size_t e = std::min(corpus.size(), b + static_cast<size_t>(batch_size));
            std::vector<std::string> texts;
            texts.reserve(e - b);
            for (size_t i = b; i < e; ++i) texts.push_back(select(corpus[i]));
            auto vecs = gateway.embed(texts);
            for (auto& v : vecs) rows.push_back(std::move(v));
        }
        return rows;
    };

    auto hl = embed_all([](const CorpusRecord& r) { return r.components.high_level; });
    auto ll = embed_all([](const CorpusRecord& r) { return r.components.low_level; });
    auto mh = embed_all([](const CorpusRecord& r) { return r.components.module_header; });

    index.dim = hl.front().dim();
    for (const auto* rows : {&hl, &ll, &mh})
        for (const auto& v : *rows)
            if (v.dim() != index.dim) throw Error("inconsistent embedding dimension");

    index.hl.reserve(index.count * index.dim);
    index.ll.reserve(index.count * index.dim);
    index.mh.reserve(index.count * index.dim);
    for (const auto& v : hl) append_row(index.hl, v);
    for (const auto& v : ll) append_row(index.ll, v);
    for (const auto& v : mh) append_row(index.mh, v);
    return index;
}

std::vector<ComponentScore> score_all(const VectorIndex& index, const EmbeddingVector& q_hl,
                                      const EmbeddingVector& q_ll, const EmbeddingVector& q_mh) {
    for (const auto* q : {&q_hl, &q_ll, &q_mh})
        if (q->dim() != index.dim)
            throw Error("query dimension " + std::to_string(q->dim()) +
                        " does not match index dimension " + std::to_string(index.dim));

    std::vector<ComponentScore> scores;
    scores.reserve(static_cast<size_t>(index.count));
    for (std::int64_t i = 0; i < index.count; ++i) {
        ComponentScore s;
        s.record_id = i;
        s.s_hl = dot(index.row(Component::HighLevel, i), q_hl.values);
        s.s_ll = dot(index.row(Component::LowLevel, i), q_ll.values);
        s.s_mh = dot(index.row(Component::ModuleHeader, i), q_mh.values);
        scores.push_back(s);
    }
    return scores;
}

std::vector<std::int64_t> top_k(const std::vector<ComponentScore>& scores, Component c, int k) {
    if (k < 1) throw Error("top_k requires k >= 1");
    std::vector<std::int64_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        double sa = scores[static_cast<size_t>(a)].get(c);
        double sb = scores[static_cast<size_t>(b)].get(c);
        if (sa != sb) return sa > sb;
        return scores[static_cast<size_t>(a)].record_id < scores[static_cast<size_t>(b)].record_id;
    });
    std::vector<std::int64_t> ids;
    ids.reserve(std::min<size_t>(order.size(), static_cast<size_t>(k)));
    for (size_t i = 0; i < order.size() && i < static_cast<size_t>(k); ++i)
        ids.push_back(scores[static_cast<size_t>(order[i])].record_id);
    return ids;
}

void save_index(const VectorIndex& index, const Corpus& corpus, const std::string& dir) {
    if (index.count != static_cast<std::int64_t>(corpus.size()))
        throw Error("index count does not match corpus size");
    std::filesystem::path root(dir);
    std::filesystem::create_directories(root);

    json meta{
        {"dim", index.dim},
        {"count", index.count},
        {"embed_model", index.embed_model},
        {"format_version", kFormatVersion},
    };
    write_file(root / "meta.json", meta.dump(2) + "\n");
    write_f32_le(root / "hl.f32", index.hl);
    write_f32_le(root / "ll.f32", index.ll);
    write_f32_le(root / "mh.f32", index.mh);
    save_corpus(corpus, (root / "records.jsonl").string());
}

LoadedIndex load_index(const std::string& dir) {
    std::filesystem::path root(dir);
    json meta = json::parse(read_file(root / "meta.json"), nullptr, false);
    if (meta.is_discarded() || !meta.is_object())
        throw Error("corrupt index: unparseable meta.json in " + dir);
    if (!meta.contains("format_version") || meta["format_version"].get<int>() != kFormatVersion)
        throw Error("corrupt index: unsupported format_version in " + dir);

    LoadedIndex loaded;
    loaded.index.dim = meta.at("dim").get<int>();
    loaded.index.count = meta.at("count").get<std::int64_t>();
    loaded.index.embed_model = meta.at("embed_model").get<std::string>();
    if (loaded.index.dim <= 0 || loaded.index.count <= 0)
        throw Error("corrupt index: bad dimensions in " + dir);

    size_t n = static_cast<size_t>(loaded.index.count) * loaded.index.dim;
    loaded.index.hl = read_f32_le(root / "hl.f32", n);
    loaded.index.ll = read_f32_le(root / "ll.f32", n);
    loaded.index.mh = read_f32_le(root / "mh.f32", n);
    check_rows_unit_norm(loaded.index.hl, loaded.index.count, loaded.index.dim, "hl.f32");
    check_rows_unit_norm(loaded.index.ll, loaded.index.count, loaded.index.dim, "ll.f32");
    check_rows_unit_norm(loaded.index.mh, loaded.index.count, loaded.index.dim, "mh.f32");

    loaded.corpus = load_corpus((root / "records.jsonl").string());
    if (static_cast<std::int64_t>(loaded.corpus.size()) != loaded.index.count)
        throw Error("corrupt index: record count mismatch in " + dir);
    return loaded;
}

} // namespace hdlcore
