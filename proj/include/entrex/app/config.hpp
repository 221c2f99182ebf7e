#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "entrex/cluster/xmeans.hpp"
#include "entrex/index/text_index.hpp"
#include "entrex/lsh/minhash.hpp"
#include "entrex/retrieval/pipeline.hpp"
#include "entrex/synth/synth.hpp"

namespace entrex::app {

struct Paths {
    std::filesystem::path corpus;
    std::filesystem::path store = "store";
    std::filesystem::path index = "index";
    std::filesystem::path vectors = "vectors";
    std::filesystem::path buckets = "buckets";
    std::filesystem::path clusters = "clusters";
    std::filesystem::path affinity = "affinity.json";
    std::filesystem::path runs = "runs";
    std::filesystem::path queries;
    std::filesystem::path qrels;
};

struct Config {
    uint64_t seed = 42;
    int threads = 0;  // 0 = hardware default
    Paths paths;

    bool strict_ingest = false;
    std::vector<std::string> title_predicates;  // empty = defaults

    index::Bm25fParams bm25;
    int feature_min_entity_freq = 2;
    double feature_max_df_fraction = 0.5;
    lsh::LshParams lsh;
    cluster::XMeansConfig xmeans;
    int spectral_max_eig_n = 2000;
    double spectral_bandwidth_quantile = 0.25;
    retrieval::RankingParams ranking;
    double affinity_alpha = 1.0;
    int affinity_min_grade = 3;
    int eval_rel_threshold = 3;
    size_t run_depth = 100;
    synth::SynthSpec synth;

    // Loads JSON, rejecting unknown keys; absent keys keep defaults.
    static Config load(const std::filesystem::path& file);
    static Config from_json_text(const std::string& text);

    // FNV-1a of the canonical serialized form; embedded in run tags.
    std::string hash() const;
    std::string canonical_json() const;
};

}  // namespace entrex::app
