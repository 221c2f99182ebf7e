// entrex: entity retrieval over RDF data with cluster-based result
// expansion and type-affinity re-ranking.
//
// Offline stages: ingest -> index -> features -> buckets -> cluster
// Online: search / batch; evaluation: eval; data generation: synth.

#include <CLI11.hpp>

#include <iostream>

#include "entrex/app/stages.hpp"
#include "entrex/core/io.hpp"
#include "entrex/core/text.hpp"

namespace {

// Exit codes: 0 ok, 2 config, 3 missing artifact, 4 input parse, 5 internal.
enum ExitCode { kOk = 0, kConfig = 2, kMissingArtifact = 3, kInputParse = 4, kInternal = 5 };

struct CommonOpts {
    std::string config_file;
    int threads = -1;  // -1 = keep config value
    std::string corpus, store, index, vectors, buckets, clusters, affinity, runs, queries, qrels;
    long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_file, "JSON config file");
    cmd->add_option("--threads", o.threads, "worker thread cap (0 = hardware default)");
    cmd->add_option("--seed", o.seed, "global seed override");
    cmd->add_option("--corpus", o.corpus, "corpus path override");
    cmd->add_option("--store", o.store, "store directory override");
    cmd->add_option("--index", o.index, "index directory override");
    cmd->add_option("--vectors", o.vectors, "vectors directory override");
    cmd->add_option("--buckets", o.buckets, "buckets directory override");
    cmd->add_option("--clusters", o.clusters, "clusters directory override");
    cmd->add_option("--affinity", o.affinity, "affinity model path override");
    cmd->add_option("--runs", o.runs, "runs directory override");
    cmd->add_option("--queries", o.queries, "queries TSV override");
    cmd->add_option("--qrels", o.qrels, "qrels file override");
}

entrex::app::Config make_config(const CommonOpts& o) {
    entrex::app::Config c = o.config_file.empty() ? entrex::app::Config{}
                                                  : entrex::app::Config::load(o.config_file);
    if (o.threads >= 0) c.threads = o.threads;
    if (o.seed >= 0) c.seed = static_cast<uint64_t>(o.seed);
    if (!o.corpus.empty()) c.paths.corpus = o.corpus;
    if (!o.store.empty()) c.paths.store = o.store;
    if (!o.index.empty()) c.paths.index = o.index;
    if (!o.vectors.empty()) c.paths.vectors = o.vectors;
    if (!o.buckets.empty()) c.paths.buckets = o.buckets;
    if (!o.clusters.empty()) c.paths.clusters = o.clusters;
    if (!o.affinity.empty()) c.paths.affinity = o.affinity;
    if (!o.runs.empty()) c.paths.runs = o.runs;
    if (!o.queries.empty()) c.paths.queries = o.queries;
    if (!o.qrels.empty()) c.paths.qrels = o.qrels;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entrex: entity retrieval on RDF data with cluster-based expansion"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* ingest = app.add_subcommand("ingest", "parse the corpus into the entity store");
    add_common(ingest, opts);
    bool strict = false;
    ingest->add_flag("--strict", strict, "abort on the first malformed line");

    auto* stats = app.add_subcommand("stats", "per-graph similarity statement counts (TSV)");
    add_common(stats, opts);

    auto* index_cmd = app.add_subcommand("index", "build the fielded inverted index");
    add_common(index_cmd, opts);

    auto* features_cmd = app.add_subcommand("features", "build per-type feature vectors");
    add_common(features_cmd, opts);

    auto* buckets_cmd = app.add_subcommand("buckets", "MinHash/LSH bucketing per type");
    add_common(buckets_cmd, opts);

    auto* cluster_cmd = app.add_subcommand("cluster", "cluster each bucket");
    add_common(cluster_cmd, opts);
    std::string algo = "xmeans";
    cluster_cmd->add_option("--algo", algo, "xmeans | spectral")->required();

    auto* train_cmd = app.add_subcommand("train-affinity", "estimate p(entity type | query type)");
    add_common(train_cmd, opts);
    std::string judgments;
    train_cmd->add_option("--judgments", judgments, "training TSV: qid, query_type, uri, grade")
        ->required();

    auto* search_cmd = app.add_subcommand("search", "run one query");
    add_common(search_cmd, opts);
    std::string mode_name = "B", field_name = "both", query_text, query_type;
    size_t top_k = 10;
    search_cmd->add_option("--mode", mode_name, "B | S1 | XM | SP");
    search_cmd->add_option("--field", field_name, "title | body | both");
    search_cmd->add_option("--query", query_text, "query text")->required();
    search_cmd->add_option("--type", query_type, "annotated query type IRI");
    search_cmd->add_option("-k,--top-k", top_k, "result depth");

    auto* batch_cmd = app.add_subcommand("batch", "run the whole queries file into a TREC run");
    add_common(batch_cmd, opts);
    std::string batch_mode = "B", batch_field = "both", batch_out;
    batch_cmd->add_option("--mode", batch_mode, "B | S1 | XM | SP");
    batch_cmd->add_option("--field", batch_field, "title | body | both");
    batch_cmd->add_option("--out", batch_out, "run file path (defaults under paths.runs)");

    auto* eval_cmd = app.add_subcommand("eval", "score runs against qrels");
    add_common(eval_cmd, opts);
    std::vector<std::string> run_files;
    std::string summary_out;
    eval_cmd->add_option("run_files", run_files, "run files")->required();
    eval_cmd->add_option("--summary", summary_out, "machine-readable summary JSON path");

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus + queries + qrels");
    add_common(synth_cmd, opts);
    std::string synth_out = "synth";
    synth_cmd->add_option("--out", synth_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        entrex::app::Config c = make_config(opts);
        if (ingest->parsed()) {
            if (strict) c.strict_ingest = true;
            const auto report = entrex::app::run_ingest(c);
            std::cerr << "lines=" << report.lines_total << " quads=" << report.quads_ok
                      << " skipped=" << report.lines_skipped() << '\n';
        } else if (stats->parsed()) {
            entrex::app::run_stats(c, std::cout);
        } else if (index_cmd->parsed()) {
            entrex::app::run_index(c);
        } else if (features_cmd->parsed()) {
            entrex::app::run_features(c);
        } else if (buckets_cmd->parsed()) {
            entrex::app::run_buckets(c);
        } else if (cluster_cmd->parsed()) {
            entrex::app::run_cluster(c, algo);
        } else if (train_cmd->parsed()) {
            entrex::app::run_train_affinity(c, judgments);
        } else if (search_cmd->parsed()) {
            const auto mode = entrex::retrieval::parse_mode(mode_name);
            const auto field = entrex::index::parse_field_mode(field_name);
            const auto ctx = entrex::app::load_search_context(c, mode);
            entrex::retrieval::QueryRecord q{"q0", query_text, query_type};
            const auto results = entrex::app::run_search(*ctx, q, mode, field, top_k);
            std::cout << entrex::retrieval::format_run(q.id, results,
                                                       entrex::app::run_tag(c, mode, field));
        } else if (batch_cmd->parsed()) {
            const auto path = entrex::app::run_batch(
                c, entrex::retrieval::parse_mode(batch_mode),
                entrex::index::parse_field_mode(batch_field),
                batch_out.empty() ? std::filesystem::path{} : std::filesystem::path(batch_out));
            std::cerr << "wrote " << path.string() << '\n';
        } else if (eval_cmd->parsed()) {
            std::vector<std::filesystem::path> paths(run_files.begin(), run_files.end());
            entrex::app::run_eval(c, paths, std::cout,
                                  summary_out.empty() ? std::filesystem::path{}
                                                      : std::filesystem::path(summary_out));
        } else if (synth_cmd->parsed()) {
            const auto out = entrex::app::run_synth(c, synth_out);
            std::cerr << "wrote " << out.nquads.string() << '\n';
        }
    } catch (const entrex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const entrex::MissingArtifactError& e) {
        std::cerr << "missing artifact: " << e.what() << '\n';
        return kMissingArtifact;
    } catch (const entrex::InputParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}
