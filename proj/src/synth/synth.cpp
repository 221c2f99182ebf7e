#include "entrex/synth/synth.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "entrex/core/io.hpp"
#include "entrex/rdf/ntriples.hpp"
#include "entrex/store/entity_store.hpp"

namespace entrex::synth {

namespace {

constexpr const char* kLabelPred = "http://www.w3.org/2000/01/rdf-schema#label";
constexpr const char* kDescPred = "urn:synth:p/desc";
constexpr const char* kGroupPred = "urn:synth:p/group";
constexpr const char* kLobePred = "urn:synth:p/lobe";
constexpr const char* kSameAs = "http://www.w3.org/2002/07/owl#sameAs";

// Each planted cluster is built from two "lobes". Members of a lobe share
// byte-identical literals (apart from the carriers' extra query tokens), so
// after frequency pruning their feature vectors coincide exactly. That
// keeps the lobes atomic under clustering: a split that would isolate a
// member of a clump cannot improve the model, and the forced k >= 2 split
// of a bucket lands on the lobe boundary. Expansion from a retrieved
// carrier therefore always reaches a hidden lobe-mate.
//
// Body literals hold one token each: multi-token lobe literals would mint
// lobe-exclusive bigram features, and those collapse the cross-lobe Jaccard
// similarity enough for LSH to put the lobes into different buckets.

std::string tok(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "tok%04d", i);
    return buf;
}

double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// floor(x) plus a Bernoulli draw on the fractional part.
int stochastic_round(double x, std::mt19937_64& rng) {
    const double fl = std::floor(x);
    const double frac = x - fl;
    int v = static_cast<int>(fl);
    if (frac > 0.0 && unit_real(rng) < frac) ++v;
    return v;
}

std::string nq_line(const std::string& s, const std::string& p, const std::string& o_iri) {
    rdf::Quad q;
    q.subject = s;
    q.predicate = p;
    q.object_is_iri = true;
    q.object_iri = o_iri;
    return rdf::to_nquads(q);
}

std::string nq_literal_line(const std::string& s, const std::string& p, const std::string& text) {
    rdf::Quad q;
    q.subject = s;
    q.predicate = p;
    q.object_is_iri = false;
    q.object_literal.lexical = text;
    return rdf::to_nquads(q);
}

}  // namespace

SynthOutput generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.num_types < 1 || spec.clusters_per_type < 1 || spec.entities_per_cluster < 1 ||
        spec.vocab_size < 1)
        throw ConfigError("synth spec counts must be >= 1");
    ensure_dir(out_dir);

    std::mt19937_64 rng(spec.seed);
    std::vector<std::string> triples;
    std::ostringstream queries, qrels, labels, train;

    constexpr int kPoolSize = 8;
    int global_cluster = 0;
    for (int t = 0; t < spec.num_types; ++t) {
        const std::string type_iri = "urn:synth:type/T" + std::to_string(t);
        for (int c = 0; c < spec.clusters_per_type; ++c, ++global_cluster) {
            const int size = spec.entities_per_cluster;
            const std::string qid = "q" + std::to_string(global_cluster);
            const std::string qa = "q" + std::to_string(global_cluster) + "a";
            const std::string qb = "q" + std::to_string(global_cluster) + "b";

            // Cluster-local token pool carved out of the shared vocabulary.
            std::vector<std::string> pool(kPoolSize);
            for (int i = 0; i < kPoolSize; ++i)
                pool[static_cast<size_t>(i)] =
                    tok((global_cluster * kPoolSize + i) % spec.vocab_size);

            int n_hidden = stochastic_round(spec.hidden_fraction * size, rng);
            n_hidden = std::clamp(n_hidden, 0, size - 1);
            const int n_visible = size - n_hidden;

            // Per-lobe body tokens, fixed for every member of the lobe.
            // Both lobes cover the full pool; noise swaps a slot for a
            // lobe-local junk token, drawn once per slot so lobe-mates stay
            // identical while the lobes drift apart.
            std::vector<std::string> lobe_body[2];
            for (int l = 0; l < 2; ++l) {
                for (int w = 0; w < kPoolSize; ++w) {
                    std::string word = pool[static_cast<size_t>(w)];
                    if (unit_real(rng) < spec.near_duplicate_noise)
                        word = "nz" + std::to_string(global_cluster) + "l" + std::to_string(l) +
                               "w" + std::to_string(w);
                    lobe_body[l].push_back(std::move(word));
                }
            }

            // Plant similarity edges from the phrase carrier to a fraction
            // of the hidden members.
            const int n_edges =
                n_hidden > 0 ? std::clamp(stochastic_round(spec.sameas_coverage * n_hidden, rng),
                                          0, n_hidden)
                             : 0;
            std::vector<int> hidden_order;
            for (int m = n_visible; m < size; ++m) hidden_order.push_back(m);
            for (size_t i = hidden_order.size(); i > 1; --i)
                std::swap(hidden_order[i - 1], hidden_order[rng() % i]);

            for (int m = 0; m < size; ++m) {
                const int lobe = m % 2;
                const std::string uri = "urn:synth:e/t" + std::to_string(t) + "c" +
                                        std::to_string(c) + "m" + std::to_string(m);
                labels << uri << '\t' << global_cluster << '\n';
                qrels << qid << " 0 " << uri << " 5\n";
                train << qid << '\t' << type_iri << '\t' << uri << "\t5\n";

                triples.push_back(nq_line(uri, store::kRdfType, type_iri));
                triples.push_back(
                    nq_line(uri, kGroupPred, "urn:synth:o/g" + std::to_string(global_cluster)));
                triples.push_back(nq_line(uri, kLobePred,
                                          "urn:synth:o/g" + std::to_string(global_cluster) + "l" +
                                              std::to_string(lobe)));

                // Titles: the carrier gets the query phrase on top of its
                // lobe title; partially visible members carry one query
                // token; hidden members only the lobe title.
                if (m == 0) {
                    triples.push_back(nq_literal_line(uri, kLabelPred, qa + " " + qb));
                    triples.push_back(
                        nq_literal_line(uri, kLabelPred, pool[static_cast<size_t>(lobe)]));
                } else if (m < n_visible) {
                    triples.push_back(nq_literal_line(
                        uri, kLabelPred, qa + " " + pool[static_cast<size_t>(lobe)]));
                } else {
                    triples.push_back(
                        nq_literal_line(uri, kLabelPred, pool[static_cast<size_t>(lobe)]));
                }
                for (const auto& word : lobe_body[lobe])
                    triples.push_back(nq_literal_line(uri, kDescPred, word));
            }

            for (int e = 0; e < n_edges; ++e) {
                const std::string carrier = "urn:synth:e/t" + std::to_string(t) + "c" +
                                            std::to_string(c) + "m0";
                const std::string target = "urn:synth:e/t" + std::to_string(t) + "c" +
                                           std::to_string(c) + "m" +
                                           std::to_string(hidden_order[static_cast<size_t>(e)]);
                triples.push_back(nq_line(carrier, kSameAs, target));
            }

            queries << qid << '\t' << qa << ' ' << qb << '\t' << type_iri << '\n';
        }
    }

    // Shuffle statements so downstream order-invariance is exercised.
    for (size_t i = triples.size(); i > 1; --i)
        std::swap(triples[i - 1], triples[rng() % i]);

    SynthOutput out;
    out.nquads = out_dir / "corpus.nq";
    out.queries = out_dir / "queries.tsv";
    out.qrels = out_dir / "qrels.txt";
    out.labels = out_dir / "labels.tsv";
    out.train = out_dir / "train.tsv";
    std::ostringstream nq;
    for (const auto& line : triples) nq << line << '\n';
    write_file(out.nquads, nq.str());
    write_file(out.queries, queries.str());
    write_file(out.qrels, qrels.str());
    write_file(out.labels, labels.str());
    write_file(out.train, train.str());
    return out;
}

}  // namespace entrex::synth
