#include "entrex/app/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "entrex/core/hash.hpp"
#include "entrex/core/io.hpp"
#include "entrex/core/text.hpp"

namespace entrex::app {

using json = nlohmann::json;  // std::map-backed: keys serialize sorted

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key))
            throw ConfigError("unknown config key `" + key + "` in " + where);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_path(const json& j, const char* key, std::filesystem::path& out) {
    if (j.contains(key)) out = j.at(key).get<std::string>();
}

}  // namespace

Config Config::from_json_text(const std::string& text) {
    Config c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j, {"seed", "threads", "paths", "ingest", "bm25f", "features", "lsh", "xmeans",
                       "spectral", "ranking", "affinity", "eval", "run_depth", "synth"},
                   "top level");
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    read(j, "run_depth", c.run_depth);

    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        reject_unknown(p, {"corpus", "store", "index", "vectors", "buckets", "clusters",
                           "affinity", "runs", "queries", "qrels"},
                       "paths");
        read_path(p, "corpus", c.paths.corpus);
        read_path(p, "store", c.paths.store);
        read_path(p, "index", c.paths.index);
        read_path(p, "vectors", c.paths.vectors);
        read_path(p, "buckets", c.paths.buckets);
        read_path(p, "clusters", c.paths.clusters);
        read_path(p, "affinity", c.paths.affinity);
        read_path(p, "runs", c.paths.runs);
        read_path(p, "queries", c.paths.queries);
        read_path(p, "qrels", c.paths.qrels);
    }
    if (j.contains("ingest")) {
        const auto& p = j.at("ingest");
        reject_unknown(p, {"strict", "title_predicates"}, "ingest");
        read(p, "strict", c.strict_ingest);
        read(p, "title_predicates", c.title_predicates);
    }
    if (j.contains("bm25f")) {
        const auto& p = j.at("bm25f");
        reject_unknown(p, {"k1", "b_title", "b_body", "w_title", "w_body"}, "bm25f");
        read(p, "k1", c.bm25.k1);
        read(p, "b_title", c.bm25.b_title);
        read(p, "b_body", c.bm25.b_body);
        read(p, "w_title", c.bm25.w_title);
        read(p, "w_body", c.bm25.w_body);
        if (c.bm25.w_title <= 0.0 && c.bm25.w_body <= 0.0)
            throw ConfigError("bm25f: at least one field weight must be positive");
    }
    if (j.contains("features")) {
        const auto& p = j.at("features");
        reject_unknown(p, {"min_entity_freq", "max_df_fraction"}, "features");
        read(p, "min_entity_freq", c.feature_min_entity_freq);
        read(p, "max_df_fraction", c.feature_max_df_fraction);
    }
    if (j.contains("lsh")) {
        const auto& p = j.at("lsh");
        reject_unknown(p, {"num_hashes", "bands", "rows", "max_bucket_size"}, "lsh");
        read(p, "num_hashes", c.lsh.num_hashes);
        read(p, "bands", c.lsh.bands);
        read(p, "rows", c.lsh.rows);
        read(p, "max_bucket_size", c.lsh.max_bucket_size);
        if (c.lsh.bands * c.lsh.rows != c.lsh.num_hashes)
            throw ConfigError("lsh: bands * rows must equal num_hashes");
    }
    if (j.contains("xmeans")) {
        const auto& p = j.at("xmeans");
        reject_unknown(p, {"k_min", "k_max", "max_iter", "tol"}, "xmeans");
        read(p, "k_min", c.xmeans.k_min);
        read(p, "k_max", c.xmeans.k_max);
        read(p, "max_iter", c.xmeans.max_iter);
        read(p, "tol", c.xmeans.tol);
        if (c.xmeans.k_min < 2 || c.xmeans.k_min > c.xmeans.k_max)
            throw ConfigError("xmeans: require 2 <= k_min <= k_max");
    }
    if (j.contains("spectral")) {
        const auto& p = j.at("spectral");
        reject_unknown(p, {"max_eig_n", "bandwidth_quantile"}, "spectral");
        read(p, "max_eig_n", c.spectral_max_eig_n);
        read(p, "bandwidth_quantile", c.spectral_bandwidth_quantile);
        if (c.spectral_bandwidth_quantile < 0.0 || c.spectral_bandwidth_quantile > 1.0)
            throw ConfigError("spectral: bandwidth_quantile must lie in [0,1]");
    }
    if (j.contains("ranking")) {
        const auto& p = j.at("ranking");
        reject_unknown(p, {"lambda_sim", "lambda_alpha", "cluster_size_max", "per_cluster",
                           "epsilon", "literal_rank_score", "s1_depth"},
                       "ranking");
        read(p, "lambda_sim", c.ranking.lambda_sim);
        read(p, "lambda_alpha", c.ranking.lambda_alpha);
        read(p, "cluster_size_max", c.ranking.cluster_size_max);
        read(p, "per_cluster", c.ranking.per_cluster);
        read(p, "epsilon", c.ranking.epsilon);
        read(p, "literal_rank_score", c.ranking.literal_rank_score);
        read(p, "s1_depth", c.ranking.s1_depth);
        if (c.ranking.lambda_sim < 0.0 || c.ranking.lambda_sim > 1.0 ||
            c.ranking.lambda_alpha < 0.0 || c.ranking.lambda_alpha > 1.0)
            throw ConfigError("ranking: lambdas must lie in [0,1]");
        if (c.ranking.cluster_size_max < 1 || c.ranking.per_cluster < 1)
            throw ConfigError("ranking: cluster_size_max and per_cluster must be >= 1");
    }
    if (j.contains("affinity")) {
        const auto& p = j.at("affinity");
        reject_unknown(p, {"alpha", "min_grade"}, "affinity");
        read(p, "alpha", c.affinity_alpha);
        read(p, "min_grade", c.affinity_min_grade);
    }
    if (j.contains("eval")) {
        const auto& p = j.at("eval");
        reject_unknown(p, {"rel_threshold"}, "eval");
        read(p, "rel_threshold", c.eval_rel_threshold);
    }
    if (j.contains("synth")) {
        const auto& p = j.at("synth");
        reject_unknown(p, {"num_types", "clusters_per_type", "entities_per_cluster", "vocab_size",
                           "near_duplicate_noise", "hidden_fraction", "sameas_coverage", "seed"},
                       "synth");
        read(p, "num_types", c.synth.num_types);
        read(p, "clusters_per_type", c.synth.clusters_per_type);
        read(p, "entities_per_cluster", c.synth.entities_per_cluster);
        read(p, "vocab_size", c.synth.vocab_size);
        read(p, "near_duplicate_noise", c.synth.near_duplicate_noise);
        read(p, "hidden_fraction", c.synth.hidden_fraction);
        read(p, "sameas_coverage", c.synth.sameas_coverage);
        read(p, "seed", c.synth.seed);
    }
    return c;
}

Config Config::load(const std::filesystem::path& file) {
    if (!std::filesystem::exists(file)) throw ConfigError("config file not found: " + file.string());
    return from_json_text(read_file(file));
}

std::string Config::canonical_json() const {
    // Paths and thread counts are deliberately excluded: the hash names the
    // parameter set, and identical parameters must yield identical run
    // files wherever the artifacts live.
    json j;
    j["seed"] = seed;
    j["run_depth"] = run_depth;
    j["ingest"] = {{"strict", strict_ingest}, {"title_predicates", title_predicates}};
    j["bm25f"] = {{"k1", bm25.k1},
                  {"b_title", bm25.b_title},
                  {"b_body", bm25.b_body},
                  {"w_title", bm25.w_title},
                  {"w_body", bm25.w_body}};
    j["features"] = {{"min_entity_freq", feature_min_entity_freq},
                     {"max_df_fraction", feature_max_df_fraction}};
    j["lsh"] = {{"num_hashes", lsh.num_hashes},
                {"bands", lsh.bands},
                {"rows", lsh.rows},
                {"max_bucket_size", lsh.max_bucket_size}};
    j["xmeans"] = {{"k_min", xmeans.k_min},
                   {"k_max", xmeans.k_max},
                   {"max_iter", xmeans.max_iter},
                   {"tol", xmeans.tol}};
    j["spectral"] = {{"max_eig_n", spectral_max_eig_n},
                     {"bandwidth_quantile", spectral_bandwidth_quantile}};
    j["ranking"] = {{"lambda_sim", ranking.lambda_sim},
                    {"lambda_alpha", ranking.lambda_alpha},
                    {"cluster_size_max", ranking.cluster_size_max},
                    {"per_cluster", ranking.per_cluster},
                    {"epsilon", ranking.epsilon},
                    {"literal_rank_score", ranking.literal_rank_score},
                    {"s1_depth", ranking.s1_depth}};
    j["affinity"] = {{"alpha", affinity_alpha}, {"min_grade", affinity_min_grade}};
    j["eval"] = {{"rel_threshold", eval_rel_threshold}};
    j["synth"] = {{"num_types", synth.num_types},
                  {"clusters_per_type", synth.clusters_per_type},
                  {"entities_per_cluster", synth.entities_per_cluster},
                  {"vocab_size", synth.vocab_size},
                  {"near_duplicate_noise", synth.near_duplicate_noise},
                  {"hidden_fraction", synth.hidden_fraction},
                  {"sameas_coverage", synth.sameas_coverage},
                  {"seed", synth.seed}};
    return j.dump();
}

std::string Config::hash() const {
    return hex64(fnv1a64(canonical_json())).substr(8);  // low 32 bits are plenty for a tag
}

}  // namespace entrex::app
