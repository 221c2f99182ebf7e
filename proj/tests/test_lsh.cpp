#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "entrex/lsh/minhash.hpp"
#include "test_util.hpp"

using namespace entrex;
using lsh::LshParams;

namespace {

std::vector<std::string> key_set(const std::string& stem, int from, int count) {
    std::vector<std::string> keys;
    for (int i = 0; i < count; ++i) keys.push_back(stem + std::to_string(from + i));
    return keys;
}

// Builds a pair of key sets with exact Jaccard shared/(2*size - shared).
std::pair<std::vector<std::string>, std::vector<std::string>> jaccard_pair(int size, int shared,
                                                                           int salt) {
    const std::string stem = "k" + std::to_string(salt) + "_";
    auto a = key_set(stem + "s", 0, shared);
    auto b = a;
    const auto only_a = key_set(stem + "a", 0, size - shared);
    const auto only_b = key_set(stem + "b", 0, size - shared);
    a.insert(a.end(), only_a.begin(), only_a.end());
    b.insert(b.end(), only_b.begin(), only_b.end());
    return {a, b};
}

double exact_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    size_t inter = 0;
    for (const auto& k : sa) inter += sb.count(k);
    return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

bool same_bucket(const std::vector<lsh::Bucket>& buckets, const std::string& u1,
                 const std::string& u2) {
    for (const auto& b : buckets) {
        const bool has1 = std::find(b.members.begin(), b.members.end(), u1) != b.members.end();
        const bool has2 = std::find(b.members.begin(), b.members.end(), u2) != b.members.end();
        if (has1 && has2) return true;
        if (has1 || has2) return false;
    }
    return false;
}

}  // namespace

TEST_CASE("signatures are deterministic and seed-sensitive") {
    const LshParams params;
    const auto keys = key_set("f", 0, 40);
    const auto s1 = lsh::signature("e", keys, params);
    const auto s2 = lsh::signature("e", keys, params);
    CHECK(s1.values == s2.values);

    LshParams other = params;
    other.seed = 1;
    CHECK(lsh::signature("e", keys, other).values != s1.values);
}

TEST_CASE("disjoint singleton key sets disagree on essentially every slot") {
    const LshParams params;
    const auto a = lsh::signature("a", {"only-key-a"}, params);
    const auto b = lsh::signature("b", {"only-key-b"}, params);
    int agree = 0;
    for (int i = 0; i < params.num_hashes; ++i)
        if (a.values[static_cast<size_t>(i)] == b.values[static_cast<size_t>(i)]) ++agree;
    CHECK(agree == 0);
}

TEST_CASE("empty feature sets get the sentinel signature") {
    const LshParams params;
    const auto s = lsh::signature("e", {}, params);
    CHECK(s.empty_features);
    for (const auto v : s.values) CHECK(v == UINT64_MAX);
}

TEST_CASE("per-slot agreement estimates the exact Jaccard similarity") {
    // Jaccard 0.5 pairs; agreement within 0.5 +/- 0.15 for >= 95% of trials.
    LshParams params;
    int within = 0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        params.seed = static_cast<uint64_t>(t);
        const auto [a, b] = jaccard_pair(30, 20, t);  // 20/40 = 0.5
        REQUIRE(exact_jaccard(a, b) == doctest::Approx(0.5));
        const auto sa = lsh::signature("a", a, params);
        const auto sb = lsh::signature("b", b, params);
        int agree = 0;
        for (int i = 0; i < params.num_hashes; ++i)
            if (sa.values[static_cast<size_t>(i)] == sb.values[static_cast<size_t>(i)]) ++agree;
        const double frac = static_cast<double>(agree) / params.num_hashes;
        if (std::abs(frac - 0.5) <= 0.15) ++within;
    }
    CHECK(within >= trials * 95 / 100);
}

TEST_CASE("identical entities land in one bucket, unrelated ones apart") {
    const LshParams params;
    const auto keys = key_set("f", 0, 30);
    const auto other = key_set("g", 0, 30);
    const std::vector<lsh::MinHashSignature> sigs = {
        lsh::signature("urn:a", keys, params),
        lsh::signature("urn:b", keys, params),
        lsh::signature("urn:c", other, params),
    };
    const auto buckets = lsh::bucket_entities("urn:T", sigs, params);
    CHECK(same_bucket(buckets, "urn:a", "urn:b"));
    CHECK_FALSE(same_bucket(buckets, "urn:a", "urn:c"));

    // Partition property: every entity in exactly one bucket.
    std::set<std::string> seen;
    size_t total = 0;
    for (const auto& b : buckets) {
        CHECK(b.entity_type == "urn:T");
        CHECK(!b.members.empty());
        total += b.members.size();
        for (const auto& m : b.members) seen.insert(m);
    }
    CHECK(total == sigs.size());
    CHECK(seen.size() == sigs.size());
}

TEST_CASE("empty-feature entities become singleton buckets") {
    const LshParams params;
    const std::vector<lsh::MinHashSignature> sigs = {
        lsh::signature("urn:a", {}, params),
        lsh::signature("urn:b", {}, params),
    };
    const auto buckets = lsh::bucket_entities("urn:T", sigs, params);
    CHECK(buckets.size() == 2);
}

TEST_CASE("co-bucketing frequency tracks the closed-form band probability") {
    LshParams params;  // b=32, r=4
    int hi_together = 0, lo_together = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        params.seed = static_cast<uint64_t>(t) + 1000;
        {
            const auto [a, b] = jaccard_pair(90, 80, 2 * t);  // J = 80/100 = 0.8
            const std::vector<lsh::MinHashSignature> sigs = {lsh::signature("urn:a", a, params),
                                                             lsh::signature("urn:b", b, params)};
            if (lsh::bucket_entities("urn:T", sigs, params).size() == 1) ++hi_together;
        }
        {
            const auto [a, b] = jaccard_pair(55, 10, 2 * t + 1);  // J = 10/100 = 0.1
            const std::vector<lsh::MinHashSignature> sigs = {lsh::signature("urn:a", a, params),
                                                             lsh::signature("urn:b", b, params)};
            if (lsh::bucket_entities("urn:T", sigs, params).size() == 1) ++lo_together;
        }
    }
    // Closed form: P(0.8) ~ 1 - 4.7e-8, P(0.1) ~ 0.0032.
    CHECK(hi_together >= 990);
    CHECK(lo_together <= 50);
}

TEST_CASE("analytic band probability is monotone in Jaccard similarity") {
    double prev = 0.0;
    for (double s = 0.0; s <= 1.0; s += 0.01) {
        const double p = lsh::band_collision_probability(s, 4, 32);
        CHECK(p >= prev - 1e-15);
        prev = p;
    }
    CHECK(lsh::band_collision_probability(0.8, 4, 32) == doctest::Approx(1.0 - 4.7e-8));
}

TEST_CASE("oversized buckets are split by re-banding") {
    LshParams params;
    params.max_bucket_size = 6;
    // Two groups of 5; members within a group share identical key sets, the
    // groups overlap at Jaccard ~0.62 so they band-collide at rows=4 but
    // separate under re-banding with more rows.
    std::vector<lsh::MinHashSignature> sigs;
    const auto shared = key_set("common", 0, 65);
    for (int g = 0; g < 2; ++g) {
        auto keys = shared;
        const auto extra = key_set("grp" + std::to_string(g) + "_", 0, 20);
        keys.insert(keys.end(), extra.begin(), extra.end());
        for (int i = 0; i < 5; ++i)
            sigs.push_back(lsh::signature("urn:e" + std::to_string(g * 5 + i), keys, params));
    }
    REQUIRE(same_bucket(lsh::bucket_entities("urn:T", sigs, {128, 32, 4, params.seed, 10000}),
                        "urn:e0", "urn:e5"));  // merged without the size cap

    const auto buckets = lsh::bucket_entities("urn:T", sigs, params);
    size_t total = 0;
    for (const auto& b : buckets) {
        CHECK(static_cast<int>(b.members.size()) <= params.max_bucket_size);
        total += b.members.size();
    }
    CHECK(total == sigs.size());
    CHECK(same_bucket(buckets, "urn:e0", "urn:e1"));
    CHECK_FALSE(same_bucket(buckets, "urn:e0", "urn:e5"));
}

TEST_CASE("bucket files round-trip") {
    const LshParams params;
    std::vector<lsh::MinHashSignature> sigs;
    for (int i = 0; i < 6; ++i)
        sigs.push_back(lsh::signature("urn:e" + std::to_string(i), key_set("f" + std::to_string(i % 2), 0, 20), params));
    const auto buckets = lsh::bucket_entities("urn:T", sigs, params);

    testutil::TempDir tmp("lsh");
    const auto file = tmp.path() / "buckets-x.tsv";
    lsh::save_buckets(buckets, file);
    const auto back = lsh::load_buckets("urn:T", file);
    REQUIRE(back.size() == buckets.size());
    for (size_t i = 0; i < buckets.size(); ++i) {
        CHECK(back[i].bucket_id == buckets[i].bucket_id);
        CHECK(back[i].members == buckets[i].members);
    }
}
