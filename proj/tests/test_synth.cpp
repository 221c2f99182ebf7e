#include <doctest.h>

#include <algorithm>
#include <set>

#include "entrex/eval/metrics.hpp"
#include "entrex/index/tokenizer.hpp"
#include "entrex/rdf/ntriples.hpp"
#include "entrex/retrieval/pipeline.hpp"
#include "entrex/synth/synth.hpp"
#include "test_util.hpp"

using namespace entrex;
using synth::SynthSpec;

TEST_CASE("generate emits the expected counts") {
    testutil::TempDir tmp("synth");
    SynthSpec spec;
    spec.num_types = 3;
    spec.clusters_per_type = 4;
    spec.entities_per_cluster = 8;
    const auto out = synth::generate(spec, tmp.path());

    const auto queries = retrieval::load_queries(out.queries);
    CHECK(queries.size() == 12);
    for (const auto& q : queries) CHECK_FALSE(q.annotated_type.empty());

    const auto qrels = eval::load_qrels(out.qrels);
    CHECK(qrels.size() == 12);
    size_t judgments = 0;
    for (const auto& [qid, m] : qrels) {
        (void)qid;
        judgments += m.size();
        CHECK(m.size() == 8);  // relevant set size == entities_per_cluster
        for (const auto& [uri, grade] : m) {
            (void)uri;
            CHECK(grade == 5);
        }
    }
    CHECK(judgments == 96);

    // 96 distinct entities in the corpus.
    rdf::QuadStream stream(out.nquads);
    std::set<std::string> subjects;
    while (auto q = stream.next()) subjects.insert(q->subject);
    CHECK(subjects.size() == 96);
    CHECK(stream.report().lines_skipped() == 0);

    // Labels cover every entity once.
    LineReader labels(out.labels);
    std::string line;
    size_t label_lines = 0;
    while (labels.next(line))
        if (!line.empty()) ++label_lines;
    CHECK(label_lines == 96);
}

TEST_CASE("generation is deterministic byte-for-byte") {
    testutil::TempDir a("synth-a"), b("synth-b");
    SynthSpec spec;
    spec.seed = 123;
    spec.sameas_coverage = 0.3;
    const auto oa = synth::generate(spec, a.path());
    const auto ob = synth::generate(spec, b.path());
    CHECK(read_file(oa.nquads) == read_file(ob.nquads));
    CHECK(read_file(oa.queries) == read_file(ob.queries));
    CHECK(read_file(oa.qrels) == read_file(ob.qrels));
    CHECK(read_file(oa.labels) == read_file(ob.labels));

    testutil::TempDir c("synth-c");
    SynthSpec other = spec;
    other.seed = 124;
    const auto oc = synth::generate(other, c.path());
    CHECK(read_file(oa.nquads) != read_file(oc.nquads));
}

TEST_CASE("hidden members never carry query tokens") {
    testutil::TempDir tmp("synth-h");
    SynthSpec spec;
    spec.hidden_fraction = 0.75;
    spec.entities_per_cluster = 4;
    const auto out = synth::generate(spec, tmp.path());

    // Collect literal text per subject and the planted query tokens.
    rdf::QuadStream stream(out.nquads);
    std::map<std::string, std::string> text;
    while (auto q = stream.next())
        if (!q->object_is_iri) text[q->subject] += " " + q->object_literal.lexical;

    size_t hidden = 0, visible = 0;
    for (const auto& [uri, body] : text) {
        // Entity uri ends in m<k>; query tokens are q<cluster>a / q<cluster>b.
        const bool has_query_token = body.find(" q") != std::string::npos;
        if (has_query_token)
            ++visible;
        else
            ++hidden;
        (void)uri;
    }
    CHECK(hidden > 0);
    CHECK(visible > 0);
    // With hidden_fraction 0.75 on 4-member clusters each cluster keeps
    // exactly one visible member.
    CHECK(visible == 12);
    CHECK(hidden == 36);
}

TEST_CASE("planted clusters are recoverable by the token-overlap oracle") {
    // Two entities sharing the majority of their body tokens must belong to
    // the same planted cluster, and same-cluster overlap always beats
    // cross-cluster overlap. Clustering ARI targets lean on this.
    testutil::TempDir tmp("synth-o");
    SynthSpec spec;
    const auto out = synth::generate(spec, tmp.path());

    rdf::QuadStream stream(out.nquads);
    std::map<std::string, std::set<std::string>> tokens;
    while (auto q = stream.next())
        if (!q->object_is_iri)
            for (const auto& t : index::tokenize(q->object_literal.lexical))
                tokens[q->subject].insert(t);

    std::map<std::string, int> planted;
    {
        LineReader r(out.labels);
        std::string line;
        while (r.next(line)) {
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            planted[line.substr(0, tab)] = std::stoi(line.substr(tab + 1));
        }
    }

    auto overlap = [&](const std::set<std::string>& a, const std::set<std::string>& b) {
        size_t inter = 0;
        for (const auto& t : a) inter += b.count(t);
        return static_cast<double>(inter) / static_cast<double>(std::max(a.size(), b.size()));
    };

    std::vector<std::string> uris;
    for (const auto& [uri, toks] : tokens) {
        (void)toks;
        uris.push_back(uri);
    }
    double worst_same = 1.0, best_cross = 0.0;
    for (size_t i = 0; i < uris.size(); ++i)
        for (size_t j = i + 1; j < uris.size(); ++j) {
            const double o = overlap(tokens[uris[i]], tokens[uris[j]]);
            if (planted[uris[i]] == planted[uris[j]])
                worst_same = std::min(worst_same, o);
            else
                best_cross = std::max(best_cross, o);
        }
    CHECK(worst_same > best_cross);
}

TEST_CASE("sameas_coverage plants similarity edges from the phrase carrier") {
    testutil::TempDir tmp("synth-s");
    SynthSpec spec;
    spec.sameas_coverage = 1.0;  // every hidden member gets an edge
    spec.entities_per_cluster = 5;
    spec.hidden_fraction = 0.8;
    const auto out = synth::generate(spec, tmp.path());

    rdf::QuadStream stream(out.nquads);
    size_t edges = 0;
    while (auto q = stream.next()) {
        if (q->predicate == "http://www.w3.org/2002/07/owl#sameAs") {
            ++edges;
            CHECK(q->subject.ends_with("m0"));
        }
    }
    CHECK(edges == 12 * 4);  // 12 clusters x 4 hidden members
}
