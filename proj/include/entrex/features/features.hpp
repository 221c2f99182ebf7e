#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "entrex/store/entity_store.hpp"

namespace entrex::features {

// Feature keys carry a namespace prefix:
//   "U:<term>"            unigram, tf-idf weighted
//   "B:<term1> <term2>"   bigram (adjacent tokens within one literal)
//   "S:<predicate>|<object>"  structural, weight fixed at 1.0
struct FeatureVector {
    std::string uri;
    std::vector<std::pair<std::string, double>> entries;  // sorted by key, weights > 0

    bool empty() const { return entries.empty(); }
    double weight(const std::string& key) const;
};

// Builds tf-idf weighted vectors for the entities of one type. idf is
// scoped to this entity set: weight = tf * ln(N / df); features present in
// every entity vanish (idf 0).
std::vector<FeatureVector> build_vectors(const std::vector<store::EntityProfile>& entities);

// Drops features present in fewer than min_entity_freq entities or in more
// than max_df_fraction of them. Entities may end up with empty vectors;
// they are kept in place.
void prune(std::vector<FeatureVector>& vectors, int min_entity_freq = 2,
           double max_df_fraction = 0.5);

// Euclidean distance over the union of feature ids (missing entries = 0).
double distance(const FeatureVector& a, const FeatureVector& b);

void save_vectors(const std::vector<FeatureVector>& vectors, const std::filesystem::path& file);
std::vector<FeatureVector> load_vectors(const std::filesystem::path& file);

// uri -> vector lookup for one type.
std::map<std::string, FeatureVector> vector_map(std::vector<FeatureVector> vectors);

}  // namespace entrex::features
