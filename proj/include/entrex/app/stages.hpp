#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "entrex/app/config.hpp"
#include "entrex/eval/metrics.hpp"

namespace entrex::app {

// Offline stages. Each is idempotent for identical inputs + config + seed
// and writes byte-stable artifacts.
rdf::IngestReport run_ingest(const Config& c);
void run_stats(const Config& c, std::ostream& out);
void run_index(const Config& c);
void run_features(const Config& c);
void run_buckets(const Config& c);
void run_cluster(const Config& c, const std::string& algo);  // "xmeans" | "spectral"
void run_train_affinity(const Config& c, const std::filesystem::path& judgments);
synth::SynthOutput run_synth(const Config& c, const std::filesystem::path& out_dir);

// Loaded online artifacts, reusable across queries.
struct SearchContext {
    store::EntityStore store;
    index::TextIndex index;
    affinity::AffinityModel affinity;
    std::map<std::string, std::map<std::string, features::FeatureVector>> vectors;
    std::unique_ptr<cluster::ClusterMap> xmeans_map;
    std::unique_ptr<cluster::ClusterMap> spectral_map;
    std::unique_ptr<retrieval::Retriever> retriever;
};

// mode: XM loads x-means clusters, SP spectral, B/S1 none.
std::unique_ptr<SearchContext> load_search_context(const Config& c, retrieval::Mode mode);

std::vector<retrieval::RankedResult> run_search(const SearchContext& ctx,
                                                const retrieval::QueryRecord& query,
                                                retrieval::Mode mode, index::FieldMode field,
                                                size_t k);

// Runs every query in the queries file; returns the run file path.
std::filesystem::path run_batch(const Config& c, retrieval::Mode mode, index::FieldMode field,
                                const std::filesystem::path& out_file = {});

struct EvalOutcome {
    std::vector<std::string> run_names;
    std::vector<eval::MetricReport> reports;
};

// Prints the metric table and pairwise t-tests for >= 1 runs; writes a
// machine-readable summary JSON next to the first run when out_summary is
// set.
EvalOutcome run_eval(const Config& c, const std::vector<std::filesystem::path>& run_files,
                     std::ostream& out, const std::filesystem::path& out_summary = {});

std::string run_tag(const Config& c, retrieval::Mode mode, index::FieldMode field);

}  // namespace entrex::app
