#include "entrex/app/stages.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entrex/cluster/spectral.hpp"
#include "entrex/core/hash.hpp"
#include "entrex/core/text.hpp"
#include "entrex/kernels/kernels.hpp"

namespace entrex::app {

using json = nlohmann::ordered_json;

namespace {

void apply_threads(const Config& c) {
    kernels::set_max_threads(c.threads);
}

std::string type_file_tag(const std::string& type_iri) {
    return hex64(fnv1a64(type_iri));
}

// vectors/ and buckets/ carry one file per type plus a types.json listing.
void write_type_listing(const std::filesystem::path& dir,
                        const std::map<std::string, std::string>& type_to_tag) {
    json j = json::object();
    for (const auto& [type, tag] : type_to_tag) j[type] = tag;
    write_file(dir / "types.json", j.dump(2) + "\n");
}

std::map<std::string, std::string> read_type_listing(const std::filesystem::path& dir,
                                                     const std::string& stage) {
    require_artifact(dir / "types.json", stage);
    std::map<std::string, std::string> out;
    const json j = json::parse(read_file(dir / "types.json"));
    for (const auto& [type, tag] : j.items()) out[type] = tag.get<std::string>();
    return out;
}

// Maps a bucket's feature vectors onto a dense index space.
std::vector<kernels::SparsePoint> to_points(
    const std::vector<const features::FeatureVector*>& vectors) {
    std::map<std::string, int32_t> dim_of;
    for (const auto* v : vectors)
        for (const auto& [key, w] : v->entries) {
            (void)w;
            dim_of.emplace(key, 0);
        }
    int32_t next = 0;
    for (auto& [key, idx] : dim_of) {
        (void)key;
        idx = next++;
    }
    std::vector<kernels::SparsePoint> points(vectors.size());
    for (size_t i = 0; i < vectors.size(); ++i) {
        for (const auto& [key, w] : vectors[i]->entries)
            points[i].entries.emplace_back(dim_of.at(key), w);
        std::sort(points[i].entries.begin(), points[i].entries.end());
    }
    return points;
}

}  // namespace

rdf::IngestReport run_ingest(const Config& c) {
    apply_threads(c);
    if (c.paths.corpus.empty()) throw ConfigError("paths.corpus is required for ingest");
    require_artifact(c.paths.corpus, "synth (or provide a corpus)");
    rdf::QuadStream stream(c.paths.corpus, c.strict_ingest);
    const auto& titles =
        c.title_predicates.empty() ? store::default_title_predicates() : c.title_predicates;
    store::assemble([&]() { return stream.next(); }, c.paths.store, titles);
    return stream.report();
}

void run_stats(const Config& c, std::ostream& out) {
    if (c.paths.corpus.empty()) throw ConfigError("paths.corpus is required for stats");
    require_artifact(c.paths.corpus, "synth (or provide a corpus)");
    rdf::QuadStream stream(c.paths.corpus, c.strict_ingest);
    const auto stats = store::corpus_stats([&]() { return stream.next(); });
    out << "graph\tsimilarity_statements\tobject_property_statements\n";
    for (const auto& [graph, g] : stats)
        out << (graph.empty() ? "-" : graph) << '\t' << g.similarity_statements << '\t'
            << g.object_property_statements << '\n';
}

void run_index(const Config& c) {
    apply_threads(c);
    const auto store = store::EntityStore::open(c.paths.store);
    index::TextIndex::build(store).save(c.paths.index);
}

void run_features(const Config& c) {
    apply_threads(c);
    const auto store = store::EntityStore::open(c.paths.store);
    ensure_dir(c.paths.vectors);
    std::map<std::string, std::string> listing;
    for (const auto& [type, count] : store.manifest().type_histogram) {
        (void)count;
        auto vectors = features::build_vectors(store.by_type(type));
        features::prune(vectors, c.feature_min_entity_freq, c.feature_max_df_fraction);
        const std::string tag = type_file_tag(type);
        features::save_vectors(vectors, c.paths.vectors / ("vectors-" + tag + ".tsv"));
        listing[type] = tag;
    }
    write_type_listing(c.paths.vectors, listing);
}

void run_buckets(const Config& c) {
    apply_threads(c);
    const auto listing = read_type_listing(c.paths.vectors, "features");
    ensure_dir(c.paths.buckets);
    lsh::LshParams params = c.lsh;
    params.seed = c.seed;
    std::map<std::string, std::string> out_listing;
    for (const auto& [type, tag] : listing) {
        const auto vectors =
            features::load_vectors(c.paths.vectors / ("vectors-" + tag + ".tsv"));
        const auto sigs = lsh::signatures(vectors, params);
        const auto buckets = lsh::bucket_entities(type, sigs, params);
        lsh::save_buckets(buckets, c.paths.buckets / ("buckets-" + tag + ".tsv"));
        out_listing[type] = tag;
    }
    write_type_listing(c.paths.buckets, out_listing);
}

void run_cluster(const Config& c, const std::string& algo) {
    apply_threads(c);
    if (algo != "xmeans" && algo != "spectral")
        throw ConfigError("unknown clustering algorithm: " + algo);
    const auto listing = read_type_listing(c.paths.buckets, "buckets");
    ensure_dir(c.paths.clusters);

    std::vector<cluster::ClusterRecord> records;
    for (const auto& [type, tag] : listing) {
        const auto vectors = features::vector_map(
            features::load_vectors(c.paths.vectors / ("vectors-" + tag + ".tsv")));
        const auto buckets =
            lsh::load_buckets(type, c.paths.buckets / ("buckets-" + tag + ".tsv"));
        for (const auto& bucket : buckets) {
            std::vector<std::vector<int>> partition;
            if (bucket.members.size() < 3) {
                // Too small to carry structure; the bucket is the cluster.
                partition.emplace_back();
                for (size_t i = 0; i < bucket.members.size(); ++i)
                    partition.back().push_back(static_cast<int>(i));
            } else if (static_cast<int>(bucket.members.size()) > c.spectral_max_eig_n &&
                       algo == "spectral") {
                std::cerr << "warning: bucket " << bucket.bucket_id << " of type " << type
                          << " exceeds spectral.max_eig_n; emitting it as one cluster\n";
                partition.emplace_back();
                for (size_t i = 0; i < bucket.members.size(); ++i)
                    partition.back().push_back(static_cast<int>(i));
            } else {
                std::vector<const features::FeatureVector*> vs;
                vs.reserve(bucket.members.size());
                static const features::FeatureVector kEmpty;
                for (const auto& uri : bucket.members) {
                    const auto it = vectors.find(uri);
                    vs.push_back(it == vectors.end() ? &kEmpty : &it->second);
                }
                const auto points = to_points(vs);
                const uint64_t task_seed =
                    mix64(c.seed ^ fnv1a64(type) ^ fnv1a64(bucket.bucket_id));
                if (algo == "xmeans") {
                    cluster::XMeansConfig xc = c.xmeans;
                    xc.seed = task_seed;
                    partition = cluster::xmeans(points, xc);
                } else {
                    partition = cluster::spectral(points, task_seed, c.xmeans.k_max,
                                                  c.xmeans.max_iter, c.xmeans.tol,
                                                  c.spectral_bandwidth_quantile);
                }
            }
            for (size_t ci = 0; ci < partition.size(); ++ci) {
                cluster::ClusterRecord rec;
                rec.cluster_id = tag + ":" + bucket.bucket_id + ":c" + std::to_string(ci);
                rec.entity_type = type;
                rec.bucket_id = bucket.bucket_id;
                rec.algorithm = algo;
                for (const int i : partition[ci])
                    rec.members.push_back(bucket.members[static_cast<size_t>(i)]);
                std::sort(rec.members.begin(), rec.members.end());
                records.push_back(std::move(rec));
            }
        }
    }
    cluster::save_clusters(records, c.paths.clusters / ("clusters-" + algo + ".tsv"));
    cluster::save_cluster_inverse(records, c.paths.clusters / ("clusters-" + algo + ".inv.tsv"));
}

void run_train_affinity(const Config& c, const std::filesystem::path& judgments) {
    const auto store = store::EntityStore::open(c.paths.store);
    const auto data = affinity::load_training_judgments(judgments, store, c.affinity_min_grade);
    affinity::AffinityModel::train(data, c.affinity_alpha).save(c.paths.affinity);
}

synth::SynthOutput run_synth(const Config& c, const std::filesystem::path& out_dir) {
    return synth::generate(c.synth, out_dir);
}

std::unique_ptr<SearchContext> load_search_context(const Config& c, retrieval::Mode mode) {
    apply_threads(c);
    auto ctx = std::make_unique<SearchContext>();
    ctx->store = store::EntityStore::open(c.paths.store);
    ctx->index = index::TextIndex::load(c.paths.index);
    ctx->affinity = affinity::AffinityModel::load(c.paths.affinity);

    ctx->retriever = std::make_unique<retrieval::Retriever>(&ctx->store, &ctx->index,
                                                            &ctx->affinity, c.bm25, c.ranking);
    if (mode == retrieval::Mode::XM || mode == retrieval::Mode::SP) {
        const auto listing = read_type_listing(c.paths.vectors, "features");
        for (const auto& [type, tag] : listing)
            ctx->vectors[type] = features::vector_map(
                features::load_vectors(c.paths.vectors / ("vectors-" + tag + ".tsv")));
        ctx->retriever->set_vectors(&ctx->vectors);

        const std::string algo = mode == retrieval::Mode::XM ? "xmeans" : "spectral";
        auto records =
            cluster::load_clusters(algo, c.paths.clusters / ("clusters-" + algo + ".tsv"));
        auto map = std::make_unique<cluster::ClusterMap>(std::move(records));
        if (mode == retrieval::Mode::XM)
            ctx->xmeans_map = std::move(map);
        else
            ctx->spectral_map = std::move(map);
        ctx->retriever->set_clusters(mode, mode == retrieval::Mode::XM ? ctx->xmeans_map.get()
                                                                       : ctx->spectral_map.get());
    }
    return ctx;
}

std::vector<retrieval::RankedResult> run_search(const SearchContext& ctx,
                                                const retrieval::QueryRecord& query,
                                                retrieval::Mode mode, index::FieldMode field,
                                                size_t k) {
    return ctx.retriever->final_rank(query, mode, field, k);
}

std::string run_tag(const Config& c, retrieval::Mode mode, index::FieldMode field) {
    return retrieval::mode_name(mode) + "_" + index::field_mode_suffix(field) + ".cfg" + c.hash();
}

std::filesystem::path run_batch(const Config& c, retrieval::Mode mode, index::FieldMode field,
                                const std::filesystem::path& out_file) {
    const auto queries = retrieval::load_queries(c.paths.queries);
    const auto ctx = load_search_context(c, mode);
    const std::string tag = run_tag(c, mode, field);

    std::ostringstream out;
    for (const auto& q : queries) {
        const auto results = run_search(*ctx, q, mode, field, c.run_depth);
        out << retrieval::format_run(q.id, results, tag);
    }
    std::filesystem::path path = out_file;
    if (path.empty()) {
        ensure_dir(c.paths.runs);
        path = c.paths.runs / ("run_" + retrieval::mode_name(mode) + "_" +
                               index::field_mode_suffix(field) + ".txt");
    }
    write_file(path, out.str());
    return path;
}

EvalOutcome run_eval(const Config& c, const std::vector<std::filesystem::path>& run_files,
                     std::ostream& out, const std::filesystem::path& out_summary) {
    if (run_files.empty()) throw ConfigError("eval requires at least one run file");
    const auto qrels = eval::load_qrels(c.paths.qrels);

    EvalOutcome outcome;
    std::vector<eval::Run> runs;
    for (const auto& f : run_files) {
        runs.push_back(eval::load_run(f));
        outcome.run_names.push_back(f.filename().string());
        outcome.reports.push_back(eval::evaluate_run(runs.back(), qrels, c.eval_rel_threshold));
    }

    out << "run\tP@10\tR@10\tMAP\tAvg(R)\tNDCG@10\tqueries\n";
    for (size_t i = 0; i < outcome.reports.size(); ++i) {
        const auto& r = outcome.reports[i];
        out << outcome.run_names[i] << '\t' << format_double(r.mean_p[9]) << '\t'
            << format_double(r.mean_r[9]) << '\t' << format_double(r.map) << '\t'
            << format_double(r.mean_avg_r) << '\t' << format_double(r.mean_ndcg[9]) << '\t'
            << r.queries_total << '\n';
    }

    out << "\nretrieved relevance grades in the top 10 (grade 2..5):\n";
    for (size_t i = 0; i < runs.size(); ++i) {
        const auto h = eval::relevance_histogram(runs[i], qrels, 10);
        out << outcome.run_names[i];
        for (int g = 0; g < 4; ++g) out << '\t' << (g + 2) << ':' << h[static_cast<size_t>(g)];
        out << '\n';
    }

    // Pairwise comparisons on queries both runs cover.
    for (size_t i = 0; i < runs.size(); ++i) {
        for (size_t j = i + 1; j < runs.size(); ++j) {
            out << "\n" << outcome.run_names[j] << " vs " << outcome.run_names[i] << ":\n";
            for (const std::string metric : {"P@10", "R@10", "AP"}) {
                std::vector<double> a, b;
                for (const auto& [qid, mi] : outcome.reports[i].per_query) {
                    const auto it = outcome.reports[j].per_query.find(qid);
                    if (it == outcome.reports[j].per_query.end()) continue;
                    const auto& mj = it->second;
                    if (metric == "P@10") {
                        a.push_back(mi.p[9]);
                        b.push_back(mj.p[9]);
                    } else if (mi.has_relevant && mj.has_relevant) {
                        if (metric == "R@10") {
                            a.push_back(mi.r[9]);
                            b.push_back(mj.r[9]);
                        } else {
                            a.push_back(mi.ap);
                            b.push_back(mj.ap);
                        }
                    }
                }
                if (a.size() < 2) {
                    out << "  " << metric << ": insufficient paired queries\n";
                    continue;
                }
                const auto tt = eval::paired_t_test(b, a);
                double delta = 0.0;
                for (size_t q = 0; q < a.size(); ++q) delta += b[q] - a[q];
                delta /= static_cast<double>(a.size());
                const std::string label = metric == "AP" ? "MAP" : metric;
                out << "  delta " << label << " = " << format_double(delta)
                    << "  t = " << format_double(tt.t) << "  p = " << format_double(tt.p)
                    << (tt.zero_variance ? " (zero-variance sentinel)" : "") << '\n';
            }
        }
    }

    if (!out_summary.empty()) {
        json j = json::array();
        for (size_t i = 0; i < outcome.reports.size(); ++i) {
            const auto& r = outcome.reports[i];
            json entry;
            entry["run"] = outcome.run_names[i];
            entry["P@10"] = r.mean_p[9];
            entry["R@10"] = r.mean_r[9];
            entry["MAP"] = r.map;
            entry["AvgR"] = r.mean_avg_r;
            entry["NDCG@10"] = r.mean_ndcg[9];
            entry["queries_total"] = r.queries_total;
            entry["queries_with_relevant"] = r.queries_with_relevant;
            j.push_back(entry);
        }
        write_file(out_summary, j.dump(2) + "\n");
    }
    return outcome;
}

}  // namespace entrex::app
