#include "entrex/lsh/minhash.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "entrex/core/hash.hpp"
#include "entrex/core/io.hpp"
#include "entrex/kernels/kernels.hpp"

namespace entrex::lsh {

namespace {

void check_params(const LshParams& p) {
    if (p.num_hashes <= 0 || p.bands <= 0 || p.rows <= 0 || p.bands * p.rows != p.num_hashes)
        throw ConfigError("lsh params must satisfy bands * rows == num_hashes");
}

uint64_t slot_seed(uint64_t base, int slot) {
    return mix64(base ^ mix64(static_cast<uint64_t>(slot) + 1));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Groups the given signature indices by identical band rows; returns the
// member groups (connected components). rows may exceed the configured one
// when re-banding oversized buckets.
std::vector<std::vector<int>> band_components(const std::vector<MinHashSignature>& sigs,
                                              const std::vector<int>& idx, int num_hashes,
                                              int rows) {
    const int bands = num_hashes / rows;
    UnionFind uf(idx.size());
    for (int b = 0; b < bands; ++b) {
        std::map<std::vector<uint64_t>, int> first_seen;
        for (size_t i = 0; i < idx.size(); ++i) {
            const auto& v = sigs[static_cast<size_t>(idx[i])].values;
            std::vector<uint64_t> key(v.begin() + static_cast<ptrdiff_t>(b) * rows,
                                      v.begin() + static_cast<ptrdiff_t>(b) * rows + rows);
            auto [it, inserted] = first_seen.try_emplace(std::move(key), static_cast<int>(i));
            if (!inserted) uf.merge(it->second, static_cast<int>(i));
        }
    }
    std::map<int, std::vector<int>> comps;
    for (size_t i = 0; i < idx.size(); ++i)
        comps[uf.find(static_cast<int>(i))].push_back(idx[i]);
    std::vector<std::vector<int>> out;
    out.reserve(comps.size());
    for (auto& [root, members] : comps) {
        (void)root;
        out.push_back(std::move(members));
    }
    return out;
}

void resolve_bucket(const std::vector<MinHashSignature>& sigs, std::vector<int> members,
                    const LshParams& params, int rows, std::vector<std::vector<int>>& final_groups) {
    if (static_cast<int>(members.size()) <= params.max_bucket_size || rows >= params.num_hashes) {
        final_groups.push_back(std::move(members));
        return;
    }
    const int next_rows = rows + 1;
    if (params.num_hashes / next_rows < 1) {
        final_groups.push_back(std::move(members));
        return;
    }
    auto groups = band_components(sigs, members, params.num_hashes, next_rows);
    if (groups.size() == 1) {
        // Re-banding did not separate anything; tighten further.
        resolve_bucket(sigs, std::move(groups[0]), params, next_rows, final_groups);
        return;
    }
    for (auto& g : groups) resolve_bucket(sigs, std::move(g), params, next_rows, final_groups);
}

}  // namespace

MinHashSignature signature(const std::string& uri, const std::vector<std::string>& keys,
                           const LshParams& params) {
    check_params(params);
    MinHashSignature sig;
    sig.uri = uri;
    sig.values.assign(static_cast<size_t>(params.num_hashes),
                      std::numeric_limits<uint64_t>::max());
    if (keys.empty()) {
        sig.empty_features = true;
        return sig;
    }
    std::vector<uint64_t> base(keys.size());
    for (size_t k = 0; k < keys.size(); ++k) base[k] = fnv1a64(keys[k]);
    for (int i = 0; i < params.num_hashes; ++i) {
        const uint64_t s = slot_seed(params.seed, i);
        uint64_t best = std::numeric_limits<uint64_t>::max();
        for (const uint64_t h : base) best = std::min(best, mix64(h ^ s));
        sig.values[static_cast<size_t>(i)] = best;
    }
    return sig;
}

std::vector<MinHashSignature> signatures_serial(const std::vector<features::FeatureVector>& vectors,
                                                const LshParams& params) {
    std::vector<MinHashSignature> out(vectors.size());
    for (size_t i = 0; i < vectors.size(); ++i) {
        std::vector<std::string> keys;
        keys.reserve(vectors[i].entries.size());
        for (const auto& [key, w] : vectors[i].entries) {
            (void)w;
            keys.push_back(key);
        }
        out[i] = signature(vectors[i].uri, keys, params);
    }
    return out;
}

std::vector<MinHashSignature> signatures(const std::vector<features::FeatureVector>& vectors,
                                         const LshParams& params) {
    check_params(params);
    std::vector<MinHashSignature> out(vectors.size());
    const auto n = static_cast<int64_t>(vectors.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(kernels::max_threads())
    for (int64_t i = 0; i < n; ++i) {
        const auto& v = vectors[static_cast<size_t>(i)];
        std::vector<std::string> keys;
        keys.reserve(v.entries.size());
        for (const auto& [key, w] : v.entries) {
            (void)w;
            keys.push_back(key);
        }
        out[static_cast<size_t>(i)] = signature(v.uri, keys, params);
    }
    return out;
}

std::vector<Bucket> bucket_entities(const std::string& entity_type,
                                    const std::vector<MinHashSignature>& sigs,
                                    const LshParams& params) {
    check_params(params);
    std::vector<std::vector<int>> groups;
    std::vector<int> active;
    for (size_t i = 0; i < sigs.size(); ++i) {
        if (sigs[i].empty_features)
            groups.push_back({static_cast<int>(i)});  // singleton by contract
        else
            active.push_back(static_cast<int>(i));
    }
    if (!active.empty()) {
        for (auto& g : band_components(sigs, active, params.num_hashes, params.rows))
            resolve_bucket(sigs, std::move(g), params, params.rows, groups);
    }

    std::vector<Bucket> buckets;
    buckets.reserve(groups.size());
    for (auto& g : groups) {
        Bucket b;
        b.entity_type = entity_type;
        for (const int i : g) b.members.push_back(sigs[static_cast<size_t>(i)].uri);
        std::sort(b.members.begin(), b.members.end());
        buckets.push_back(std::move(b));
    }
    std::sort(buckets.begin(), buckets.end(),
              [](const Bucket& a, const Bucket& b) { return a.members.front() < b.members.front(); });
    for (size_t i = 0; i < buckets.size(); ++i) {
        char id[16];
        std::snprintf(id, sizeof(id), "b%04zu", i);
        buckets[i].bucket_id = id;
    }
    return buckets;
}

void save_buckets(const std::vector<Bucket>& buckets, const std::filesystem::path& file) {
    std::ostringstream out;
    for (const auto& b : buckets)
        for (const auto& uri : b.members) out << b.bucket_id << '\t' << uri << '\n';
    write_file(file, out.str());
}

std::vector<Bucket> load_buckets(const std::string& entity_type,
                                 const std::filesystem::path& file) {
    require_artifact(file, "buckets");
    std::map<std::string, Bucket> by_id;
    LineReader r(file);
    std::string line;
    while (r.next(line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        Bucket& b = by_id[f[0]];
        b.bucket_id = f[0];
        b.entity_type = entity_type;
        b.members.push_back(f[1]);
    }
    std::vector<Bucket> out;
    out.reserve(by_id.size());
    for (auto& [id, b] : by_id) {
        (void)id;
        out.push_back(std::move(b));
    }
    return out;
}

double band_collision_probability(double jaccard, int rows, int bands) {
    return 1.0 - std::pow(1.0 - std::pow(jaccard, rows), bands);
}

}  // namespace entrex::lsh
