#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "entrex/store/entity_store.hpp"
#include "test_util.hpp"

using namespace entrex;
using store::EntityProfile;
using store::EntityStore;

namespace {

std::function<std::optional<rdf::Quad>()> quad_feed(std::vector<rdf::Quad> quads) {
    auto idx = std::make_shared<size_t>(0);
    auto data = std::make_shared<std::vector<rdf::Quad>>(std::move(quads));
    return [idx, data]() -> std::optional<rdf::Quad> {
        if (*idx >= data->size()) return std::nullopt;
        return (*data)[(*idx)++];
    };
}

rdf::Quad iri_quad(const std::string& s, const std::string& p, const std::string& o) {
    rdf::Quad q;
    q.subject = s;
    q.predicate = p;
    q.object_is_iri = true;
    q.object_iri = o;
    return q;
}

rdf::Quad lit_quad(const std::string& s, const std::string& p, const std::string& text) {
    rdf::Quad q;
    q.subject = s;
    q.predicate = p;
    q.object_is_iri = false;
    q.object_literal.lexical = text;
    return q;
}

constexpr const char* kLabel = "http://www.w3.org/2000/01/rdf-schema#label";

}  // namespace

TEST_CASE("assemble builds profiles with titles, types and properties") {
    testutil::TempDir tmp("store");
    const std::vector<rdf::Quad> quads = {
        lit_quad("http://ex/e1", kLabel, "Obama"),
        iri_quad("http://ex/e1", store::kRdfType, "http://ex/Person"),
        iri_quad("http://ex/e1", "http://ex/spouse", "http://ex/e2"),
    };
    const auto manifest = store::assemble(quad_feed(quads), tmp.path());
    CHECK(manifest.entity_count == 1);

    const auto s = EntityStore::open(tmp.path());
    const auto p = s.get("http://ex/e1");
    CHECK(p.title_literals == std::vector<std::string>{"Obama"});
    CHECK(p.body_literals == std::vector<std::string>{"Obama"});
    CHECK(p.types == std::vector<std::string>{"http://ex/Person"});
    REQUIRE(p.object_properties.size() == 1);
    CHECK(p.object_properties[0] == std::pair<std::string, std::string>{"http://ex/spouse",
                                                                        "http://ex/e2"});
}

TEST_CASE("entities without literals or types get defaults") {
    testutil::TempDir tmp("store");
    store::assemble(quad_feed({iri_quad("http://ex/x", "http://ex/p", "http://ex/y")}),
                    tmp.path());
    const auto s = EntityStore::open(tmp.path());
    const auto p = s.get("http://ex/x");
    CHECK(p.title_literals.empty());
    CHECK(p.body_literals.empty());
    CHECK(p.types == std::vector<std::string>{store::kUntypedType});
}

TEST_CASE("multiple rdf:type triples become a type set") {
    testutil::TempDir tmp("store");
    store::assemble(quad_feed({iri_quad("http://ex/x", store::kRdfType, "http://ex/A"),
                               iri_quad("http://ex/x", store::kRdfType, "http://ex/B"),
                               iri_quad("http://ex/x", store::kRdfType, "http://ex/A")}),
                    tmp.path());
    const auto p = EntityStore::open(tmp.path()).get("http://ex/x");
    CHECK(p.types == std::vector<std::string>{"http://ex/A", "http://ex/B"});
}

TEST_CASE("get on an unknown uri throws; by_type iterates in uri order") {
    testutil::TempDir tmp("store");
    store::assemble(quad_feed({iri_quad("http://ex/b", store::kRdfType, "http://ex/P"),
                               iri_quad("http://ex/a", store::kRdfType, "http://ex/P"),
                               iri_quad("http://ex/c", store::kRdfType, "http://ex/P"),
                               iri_quad("http://ex/z", store::kRdfType, "http://ex/Q")}),
                    tmp.path());
    const auto s = EntityStore::open(tmp.path());
    CHECK_THROWS_AS(s.get("http://ex/nope"), UnknownUriError);

    const auto persons = s.by_type("http://ex/P");
    REQUIRE(persons.size() == 3);
    CHECK(persons[0].uri == "http://ex/a");
    CHECK(persons[1].uri == "http://ex/b");
    CHECK(persons[2].uri == "http://ex/c");
}

TEST_CASE("assemble deduplicates and is order-invariant") {
    std::vector<rdf::Quad> quads;
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 60; ++i) {
        const std::string s = "http://ex/e" + std::to_string(rng() % 8);
        switch (rng() % 3) {
            case 0: quads.push_back(lit_quad(s, kLabel, "name" + std::to_string(rng() % 5))); break;
            case 1:
                quads.push_back(iri_quad(s, store::kRdfType, "http://ex/T" + std::to_string(rng() % 3)));
                break;
            default:
                quads.push_back(iri_quad(s, "http://ex/p" + std::to_string(rng() % 4),
                                         "http://ex/o" + std::to_string(rng() % 6)));
        }
    }
    quads.push_back(quads.front());  // guaranteed duplicate

    testutil::TempDir d1("store-a"), d2("store-b");
    store::assemble(quad_feed(quads), d1.path());
    std::shuffle(quads.begin(), quads.end(), rng);
    store::assemble(quad_feed(quads), d2.path());

    CHECK(read_file(d1.path() / "profiles.dat") == read_file(d2.path() / "profiles.dat"));
    CHECK(read_file(d1.path() / "profiles.idx") == read_file(d2.path() / "profiles.idx"));
    CHECK(read_file(d1.path() / "manifest.json") == read_file(d2.path() / "manifest.json"));
}

TEST_CASE("triple count conservation per profile") {
    // |object_properties| + distinct literal triples + |types| == distinct triples.
    std::mt19937_64 rng(77);
    std::vector<rdf::Quad> quads;
    std::set<std::string> distinct;
    for (int i = 0; i < 40; ++i) {
        rdf::Quad q;
        switch (rng() % 3) {
            case 0: q = lit_quad("http://ex/e", "http://ex/lp" + std::to_string(rng() % 4),
                                 "text" + std::to_string(rng() % 6)); break;
            case 1: q = iri_quad("http://ex/e", store::kRdfType, "http://ex/T" + std::to_string(rng() % 3)); break;
            default: q = iri_quad("http://ex/e", "http://ex/p" + std::to_string(rng() % 3),
                                  "http://ex/o" + std::to_string(rng() % 4));
        }
        distinct.insert(rdf::to_nquads(q));
        quads.push_back(std::move(q));
    }
    testutil::TempDir tmp("store");
    store::assemble(quad_feed(quads), tmp.path());
    const auto p = EntityStore::open(tmp.path()).get("http://ex/e");
    const size_t n_types = p.types.size() == 1 && p.types[0] == store::kUntypedType ? 0 : p.types.size();
    CHECK(p.object_properties.size() + p.body_literals.size() + n_types == distinct.size());
}

TEST_CASE("profile record codec round-trips") {
    EntityProfile p;
    p.uri = "http://ex/e1";
    p.types = {"http://ex/A"};
    p.title_literals = {"with\ttab", "with\nnewline"};
    p.body_literals = {"with\ttab", "with\nnewline", "plain"};
    p.object_properties = {{"http://ex/p", "http://ex/o"}};
    CHECK(store::decode_profile(store::encode_profile(p)) == p);
}

TEST_CASE("corpus_stats counts similarity vs object-property statements per graph") {
    auto with_graph = [](rdf::Quad q, const std::string& g) {
        q.graph = g;
        return q;
    };
    std::vector<rdf::Quad> quads;
    for (int i = 0; i < 2; ++i)
        quads.push_back(with_graph(iri_quad("http://ex/a" + std::to_string(i),
                                            "http://www.w3.org/2002/07/owl#sameAs",
                                            "http://ex/b" + std::to_string(i)),
                                   "http://g/1"));
    for (int i = 0; i < 5; ++i)
        quads.push_back(with_graph(iri_quad("http://ex/c" + std::to_string(i), "http://ex/p",
                                            "http://ex/d" + std::to_string(i)),
                                   "http://g/1"));
    quads.push_back(with_graph(lit_quad("http://ex/c0", "http://ex/p", "text"), "http://g/1"));
    quads.push_back(with_graph(iri_quad("http://ex/x", "http://ex/p", "http://ex/y"), "http://g/2"));

    const auto stats = store::corpus_stats(quad_feed(quads));
    REQUIRE(stats.size() == 2);
    CHECK(stats.at("http://g/1").similarity_statements == 2);
    CHECK(stats.at("http://g/1").object_property_statements == 7);
    CHECK(stats.at("http://g/2").similarity_statements == 0);
    CHECK(stats.at("http://g/2").object_property_statements == 1);

    CHECK(store::corpus_stats(quad_feed({})).empty());
}
