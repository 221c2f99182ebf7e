#include <doctest.h>

#include <cmath>
#include <memory>

#include "entrex/index/text_index.hpp"
#include "entrex/index/tokenizer.hpp"
#include "entrex/store/entity_store.hpp"
#include "test_util.hpp"

using namespace entrex;
using index::Bm25fParams;
using index::FieldMode;
using index::TextIndex;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
    CHECK(index::tokenize("Harry Potter movie") ==
          std::vector<std::string>{"harry", "potter", "movie"});
    CHECK(index::tokenize("U.S. Presidents") == std::vector<std::string>{"u", "s", "presidents"});
    CHECK(index::tokenize("") == std::vector<std::string>{});
    CHECK(index::tokenize("route 66!") == std::vector<std::string>{"route", "66"});
    CHECK(index::tokenize("\xc3\x89migr\xc3\xa9") == std::vector<std::string>{"\xc3\xa9migr\xc3\xa9"});
}

namespace {

constexpr const char* kLabel = "http://www.w3.org/2000/01/rdf-schema#label";
constexpr const char* kDesc = "http://ex/desc";

rdf::Quad lit(const std::string& s, const std::string& p, const std::string& text) {
    rdf::Quad q;
    q.subject = s;
    q.predicate = p;
    q.object_is_iri = false;
    q.object_literal.lexical = text;
    return q;
}

// Three-entity hand corpus used by the BM25F oracle checks:
//   e1: title [obama]         body [obama | obama president united states]
//   e2: title [barack obama]  body [barack obama | barack senator illinois]
//   e3: title [president]     body [president | united states president office]
std::unique_ptr<testutil::TempDir> hand_corpus(store::EntityStore& out) {
    auto tmp = std::make_unique<testutil::TempDir>("index");
    std::vector<rdf::Quad> quads = {
        lit("http://ex/e1", kLabel, "obama"),
        lit("http://ex/e1", kDesc, "obama president united states"),
        lit("http://ex/e2", kLabel, "barack obama"),
        lit("http://ex/e2", kDesc, "barack senator illinois"),
        lit("http://ex/e3", kLabel, "president"),
        lit("http://ex/e3", kDesc, "united states president office"),
    };
    size_t i = 0;
    store::assemble(
        [&]() -> std::optional<rdf::Quad> {
            if (i >= quads.size()) return std::nullopt;
            return quads[i++];
        },
        tmp->path());
    out = store::EntityStore::open(tmp->path());
    return tmp;
}

// Direct evaluation of the scoring formula from explicit tf/len tables —
// the spreadsheet-style oracle, independent of the index implementation.
double bm25f_oracle(double n_docs, double df, double tf_title, double tf_body, double len_title,
                    double len_body, double avg_title, double avg_body, const Bm25fParams& p,
                    bool use_title, bool use_body) {
    const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    double s = 0.0;
    if (use_title && tf_title > 0)
        s += p.w_title * tf_title / (1.0 + p.b_title * (len_title / avg_title - 1.0));
    if (use_body && tf_body > 0)
        s += p.w_body * tf_body / (1.0 + p.b_body * (len_body / avg_body - 1.0));
    if (s <= 0.0) return 0.0;
    return idf * s / (p.k1 + s);
}

}  // namespace

TEST_CASE("bm25f matches the hand-computed three-document oracle") {
    store::EntityStore s;
    auto tmp = hand_corpus(s);
    const TextIndex idx = TextIndex::build(s);
    const Bm25fParams p;

    // Corpus-wide stats derived by hand: N=3, df(obama)=2,
    // title lengths 1/2/1 (avg 4/3), body lengths 5/5/5 (avg 5).
    const double avg_t = 4.0 / 3.0, avg_b = 5.0;

    SUBCASE("both fields") {
        const double e1 = bm25f_oracle(3, 2, 1, 2, 1, 5, avg_t, avg_b, p, true, true);
        const double e2 = bm25f_oracle(3, 2, 1, 1, 2, 5, avg_t, avg_b, p, true, true);
        CHECK(idx.bm25f_score({"obama"}, "http://ex/e1", p, FieldMode::Both) ==
              doctest::Approx(e1).epsilon(1e-9));
        CHECK(idx.bm25f_score({"obama"}, "http://ex/e2", p, FieldMode::Both) ==
              doctest::Approx(e2).epsilon(1e-9));
        // Frozen from an independent evaluation of the same formula.
        CHECK(std::abs(idx.bm25f_score({"obama"}, "http://ex/e1", p, FieldMode::Both) -
                       0.37038329478604171) < 1e-9);
        CHECK(std::abs(idx.bm25f_score({"obama"}, "http://ex/e2", p, FieldMode::Both) -
                       0.31567407934415082) < 1e-9);
    }
    SUBCASE("absent term contributes zero") {
        CHECK(idx.bm25f_score({"obama"}, "http://ex/e3", p, FieldMode::Both) == 0.0);
        CHECK(idx.bm25f_score({"zzz"}, "http://ex/e1", p, FieldMode::Both) == 0.0);
    }
    SUBCASE("title-only mode masks the body field") {
        const double e1 = bm25f_oracle(3, 2, 1, 2, 1, 5, avg_t, avg_b, p, true, false);
        CHECK(idx.bm25f_score({"obama"}, "http://ex/e1", p, FieldMode::TitleOnly) ==
              doctest::Approx(e1).epsilon(1e-9));
        Bm25fParams masked = p;
        masked.w_body = 0.0;
        CHECK(idx.bm25f_score({"obama"}, "http://ex/e1", masked, FieldMode::Both) ==
              idx.bm25f_score({"obama"}, "http://ex/e1", p, FieldMode::TitleOnly));
    }
    SUBCASE("unknown uri throws") {
        CHECK_THROWS_AS(idx.bm25f_score({"obama"}, "http://ex/nope", p, FieldMode::Both),
                        UnknownUriError);
    }
}

TEST_CASE("score is monotone in tf, all else fixed") {
    const Bm25fParams p;
    double prev = 0.0;
    for (int tf = 0; tf <= 8; ++tf) {
        const double s = bm25f_oracle(10, 4, tf, 0, 3, 10, 3, 10, p, true, true);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("search ranks, truncates and stays deterministic") {
    store::EntityStore s;
    auto tmp = hand_corpus(s);
    const TextIndex idx = TextIndex::build(s);
    const Bm25fParams p;

    SUBCASE("title-only hit ranks the title carrier first") {
        const auto res = idx.search({"barack"}, FieldMode::TitleOnly, 10, p);
        REQUIRE(res.size() == 1);
        CHECK(res[0].uri == "http://ex/e2");
        CHECK(res[0].rank == 1);
    }
    SUBCASE("empty query yields an empty list") {
        CHECK(idx.search({}, FieldMode::Both, 10, p).empty());
    }
    SUBCASE("k larger than the match set returns every match") {
        const auto res = idx.search({"obama"}, FieldMode::Both, 100, p);
        CHECK(res.size() == 2);
    }
    SUBCASE("zero-score entities are excluded") {
        // "barack" appears only in e2; title_only mode must not emit e1/e3.
        const auto res = idx.search({"barack"}, FieldMode::TitleOnly, 10, p);
        CHECK(res.size() == 1);
    }
    SUBCASE("scores are non-increasing and ranks gapless") {
        const auto res = idx.search({"obama", "president", "united"}, FieldMode::Both, 10, p);
        REQUIRE(res.size() >= 2);
        for (size_t i = 1; i < res.size(); ++i) {
            CHECK(res[i - 1].score >= res[i].score);
            CHECK(res[i].rank == static_cast<int>(i) + 1);
        }
    }
    SUBCASE("identical queries produce byte-identical rankings") {
        const auto a = idx.search({"obama", "united"}, FieldMode::Both, 10, p);
        const auto b = idx.search({"obama", "united"}, FieldMode::Both, 10, p);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].uri == b[i].uri);
            CHECK(a[i].score == b[i].score);
        }
    }
}

TEST_CASE("index save/load round-trips and rebuilds are byte-identical") {
    store::EntityStore s;
    auto tmp = hand_corpus(s);
    const TextIndex idx = TextIndex::build(s);

    testutil::TempDir d1("idx-a"), d2("idx-b");
    idx.save(d1.path());
    TextIndex::build(s).save(d2.path());
    for (const char* f : {"dictionary.dat", "postings.dat", "doclens.dat", "stats.json"})
        CHECK(read_file(d1.path() / f) == read_file(d2.path() / f));

    const TextIndex loaded = TextIndex::load(d1.path());
    const Bm25fParams p;
    CHECK(loaded.bm25f_score({"obama"}, "http://ex/e1", p, FieldMode::Both) ==
          idx.bm25f_score({"obama"}, "http://ex/e1", p, FieldMode::Both));
}

TEST_CASE("normalize_scores maps into [0,1] anchored at the maximum") {
    std::vector<index::ScoredEntity> r = {{"a", 4.0, 1}, {"b", 2.0, 2}, {"c", 1.0, 3}};
    index::normalize_scores(r);
    CHECK(r[0].score == 1.0);
    CHECK(r[1].score == 0.5);
    CHECK(r[2].score == 0.25);

    std::vector<index::ScoredEntity> single = {{"a", 7.5, 1}};
    index::normalize_scores(single);
    CHECK(single[0].score == 1.0);

    std::vector<index::ScoredEntity> equal = {{"a", 3.0, 1}, {"b", 3.0, 2}};
    index::normalize_scores(equal);
    CHECK(equal[0].score == 1.0);
    CHECK(equal[1].score == 1.0);

    std::vector<index::ScoredEntity> empty;
    CHECK_THROWS(index::normalize_scores(empty));
}
