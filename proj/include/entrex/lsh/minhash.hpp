#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrex/features/features.hpp"

namespace entrex::lsh {

struct LshParams {
    int num_hashes = 128;
    int bands = 32;
    int rows = 4;  // bands * rows == num_hashes
    uint64_t seed = 0;
    int max_bucket_size = 2000;
};

struct MinHashSignature {
    std::string uri;
    std::vector<uint64_t> values;
    bool empty_features = false;  // sentinel signature; goes to a singleton bucket
};

// values[i] = min over feature keys of mix64(fnv1a64(key) ^ seed_i).
MinHashSignature signature(const std::string& uri, const std::vector<std::string>& keys,
                           const LshParams& params);

// Batch signature computation over the pruned vectors' key sets.
std::vector<MinHashSignature> signatures_serial(const std::vector<features::FeatureVector>& vectors,
                                                const LshParams& params);
std::vector<MinHashSignature> signatures(const std::vector<features::FeatureVector>& vectors,
                                          const LshParams& params);

struct Bucket {
    std::string bucket_id;
    std::string entity_type;
    std::vector<std::string> members;  // sorted
};

// Buckets = connected components of the band-collision graph. Oversized
// buckets are re-banded with rows+1 until they fit max_bucket_size or no
// further split is possible. Deterministic: buckets are sorted by first
// member and numbered b0000, b0001, ...
std::vector<Bucket> bucket_entities(const std::string& entity_type,
                                    const std::vector<MinHashSignature>& sigs,
                                    const LshParams& params);

void save_buckets(const std::vector<Bucket>& buckets, const std::filesystem::path& file);
std::vector<Bucket> load_buckets(const std::string& entity_type,
                                 const std::filesystem::path& file);

// Analytic probability that a pair with Jaccard similarity s shares at
// least one band: 1 - (1 - s^rows)^bands.
double band_collision_probability(double jaccard, int rows, int bands);

}  // namespace entrex::lsh
