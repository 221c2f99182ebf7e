#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "entrex/store/entity_store.hpp"

namespace entrex::index {

struct Bm25fParams {
    double k1 = 1.2;
    double b_title = 0.75;
    double b_body = 0.75;
    double w_title = 2.0;
    double w_body = 1.0;
};

enum class FieldMode { TitleOnly, BodyOnly, Both };

FieldMode parse_field_mode(const std::string& name);  // "title" | "body" | "both"
std::string field_mode_suffix(FieldMode);             // "t" | "b" | "tb"

struct ScoredEntity {
    std::string uri;
    double score = 0.0;
    int rank = 0;
};

struct Posting {
    uint32_t doc = 0;  // index into the document table
    uint32_t tf_title = 0;
    uint32_t tf_body = 0;
};

// Fielded inverted index with BM25F scoring:
//   score = sum_t idf(t) * s(t) / (k1 + s(t))
//   s(t)  = sum_f w_f * tf(t,f,d) / (1 + b_f * (len_f(d) / avglen_f - 1))
//   idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
// Inactive fields contribute with w_f = 0.
class TextIndex {
public:
    static TextIndex build(const store::EntityStore& s);
    void save(const std::filesystem::path& dir) const;
    static TextIndex load(const std::filesystem::path& dir);

    double bm25f_score(const std::vector<std::string>& query_tokens, const std::string& uri,
                       const Bm25fParams& params, FieldMode mode) const;

    // Top-k by score, ties by uri; zero-score entities excluded.
    std::vector<ScoredEntity> search(const std::vector<std::string>& query_tokens, FieldMode mode,
                                     size_t k, const Bm25fParams& params) const;

    size_t doc_count() const { return doc_uris_.size(); }

    // Serial reference for the parallel candidate-scoring loop; exposed for
    // the kernel parity tests and the benchmark.
    std::vector<double> score_candidates_serial(const std::vector<std::string>& query_tokens,
                                                const std::vector<uint32_t>& candidates,
                                                const Bm25fParams& params, FieldMode mode) const;
    std::vector<double> score_candidates(const std::vector<std::string>& query_tokens,
                                         const std::vector<uint32_t>& candidates,
                                         const Bm25fParams& params, FieldMode mode) const;
    std::vector<uint32_t> gather_candidates(const std::vector<std::string>& query_tokens) const;

private:
    double score_doc(uint32_t doc, const std::vector<const std::vector<Posting>*>& plists,
                     const std::vector<double>& idfs, const Bm25fParams& params,
                     FieldMode mode) const;
    void prepare_terms(const std::vector<std::string>& query_tokens,
                       std::vector<const std::vector<Posting>*>& plists,
                       std::vector<double>& idfs) const;

    std::vector<std::string> doc_uris_;  // sorted; doc id = position
    std::vector<uint32_t> title_len_;
    std::vector<uint32_t> body_len_;
    std::map<std::string, std::vector<Posting>> postings_;  // term -> by doc id
    double avg_title_len_ = 0.0;
    double avg_body_len_ = 0.0;
};

// Max-normalization into [0,1]; throws InternalError on an empty list.
void normalize_scores(std::vector<ScoredEntity>& results);

}  // namespace entrex::index
