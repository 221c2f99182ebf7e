#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace entrex::synth {

// Deterministic generator for desk-scale end-to-end experiments. Each
// planted cluster owns a distinctive token pool and structural properties;
// exactly one member carries the full query phrase in its title, a
// hidden_fraction of members carry no query token anywhere (invisible to
// lexical retrieval), and any members in between carry a single query token
// in their titles. sameas_coverage plants owl:sameAs edges from the phrase
// carrier to that fraction of the hidden members.
struct SynthSpec {
    int num_types = 3;
    int clusters_per_type = 4;
    int entities_per_cluster = 5;
    int vocab_size = 400;
    double near_duplicate_noise = 0.1;
    double hidden_fraction = 0.8;
    double sameas_coverage = 0.0;
    uint64_t seed = 7;
};

struct SynthOutput {
    std::filesystem::path nquads;   // corpus.nq
    std::filesystem::path queries;  // queries.tsv
    std::filesystem::path qrels;    // qrels.txt
    std::filesystem::path labels;   // labels.tsv (uri -> planted cluster)
    std::filesystem::path train;    // train.tsv (qid, query_type, uri, grade)
};

SynthOutput generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace entrex::synth
