#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "entrex/affinity/affinity_model.hpp"
#include "entrex/cluster/records.hpp"
#include "entrex/features/features.hpp"
#include "entrex/index/text_index.hpp"
#include "entrex/store/entity_store.hpp"

namespace entrex::retrieval {

struct QueryRecord {
    std::string id;
    std::string text;
    std::string annotated_type;  // empty = infer
};

struct QueryAnalysis {
    std::vector<std::string> span_tokens;    // longest title-matching sub-sequence
    std::vector<std::string> context_terms;  // the remaining tokens
    std::string query_type;
    bool type_inferred = false;
};

struct RankingParams {
    double lambda_sim = 0.5;    // query-biased similarity mix
    double lambda_alpha = 0.5;  // final score vs context mix
    int cluster_size_max = 10;
    int per_cluster = 1;
    double epsilon = 1e-6;
    bool literal_rank_score = false;  // sim/rank instead of (1-sim_norm)/rank
    int s1_depth = 1;
};

enum class Mode { B, S1, XM, SP };
Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

struct ExpandedCandidate {
    std::string uri;
    std::string source_entity;
    int source_rank = 0;
    std::string cluster_id;
    double sim = 0.0;  // lower = more similar (distance-flavored)
};

struct LinkCandidate {
    std::string uri;
    std::string source_entity;
    int source_rank = 0;
    double score = 0.0;  // inherited normalized score / hop count
};

struct RankedResult {
    std::string uri;
    double alpha = 0.0;
    enum class Origin { Baseline, Expanded, LinkExpanded } origin = Origin::Baseline;
    int rank = 0;
};

// Normalized Levenshtein between the query text and the entity's primary
// title (both lowercased); entities without titles score 1.0.
double string_distance(const std::string& query_text, const store::EntityProfile& entity);

// Query-biased candidate similarity:
//   lambda * (phi_c / max(eps, phi_b)) + (1 - lambda) * d(e_b, e_c)
double query_biased_sim(double phi_candidate, double phi_source, double feature_dist,
                        const RankingParams& params);

// Fraction of context terms appearing among the entity's title tokens;
// empty context yields nullopt.
std::optional<double> context_score(const std::vector<std::string>& context_terms,
                                    const store::EntityProfile& entity);

// Final-score combination: lambda * (rank_score * gamma) + (1-lambda) * context
// when context is present, otherwise rank_score * gamma.
double combine_alpha(double rank_score, double gamma, std::optional<double> context,
                     double lambda);

// Online retrieval over the prebuilt artifacts.
class Retriever {
public:
    Retriever(const store::EntityStore* store, const index::TextIndex* index,
              const affinity::AffinityModel* affinity, index::Bm25fParams bm25, RankingParams params);

    // Cluster artifacts are optional until an XM/SP query arrives; vectors
    // are keyed by entity type.
    void set_clusters(Mode mode, const cluster::ClusterMap* map);
    void set_vectors(const std::map<std::string, std::map<std::string, features::FeatureVector>>*
                         vectors_by_type);

    QueryAnalysis analyze(const QueryRecord& query) const;

    std::vector<ExpandedCandidate> expand(const QueryRecord& query,
                                          const std::vector<index::ScoredEntity>& baseline,
                                          const cluster::ClusterMap& map) const;

    std::vector<LinkCandidate> s1_expand(const std::vector<index::ScoredEntity>& baseline_normalized) const;

    std::vector<RankedResult> final_rank(const QueryRecord& query, Mode mode,
                                         index::FieldMode field_mode, size_t k) const;

private:
    const store::EntityStore* store_;
    const index::TextIndex* index_;
    const affinity::AffinityModel* affinity_;
    index::Bm25fParams bm25_;
    RankingParams params_;
    const cluster::ClusterMap* xmeans_clusters_ = nullptr;
    const cluster::ClusterMap* spectral_clusters_ = nullptr;
    const std::map<std::string, std::map<std::string, features::FeatureVector>>* vectors_ = nullptr;

    std::set<std::string> title_phrases_;                // tokenized titles
    mutable std::map<std::string, store::EntityProfile> profile_cache_;

    const store::EntityProfile& profile(const std::string& uri) const;
    const features::FeatureVector* vector_for(const std::string& type, const std::string& uri) const;
    std::string infer_query_type(const std::vector<std::string>& span_tokens) const;
};

// TSV `qid <TAB> text [<TAB> query_type]`.
std::vector<QueryRecord> load_queries(const std::filesystem::path& file);

// TREC run line block: `qid Q0 uri rank score tag`.
std::string format_run(const std::string& query_id, const std::vector<RankedResult>& results,
                       const std::string& tag);

}  // namespace entrex::retrieval
