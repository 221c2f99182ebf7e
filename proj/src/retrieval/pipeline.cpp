#include "entrex/retrieval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "entrex/core/io.hpp"
#include "entrex/core/text.hpp"
#include "entrex/index/tokenizer.hpp"

namespace entrex::retrieval {

Mode parse_mode(const std::string& name) {
    if (name == "B") return Mode::B;
    if (name == "S1") return Mode::S1;
    if (name == "XM") return Mode::XM;
    if (name == "SP") return Mode::SP;
    throw ConfigError("unknown mode: " + name + " (expected B|S1|XM|SP)");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::B: return "B";
        case Mode::S1: return "S1";
        case Mode::XM: return "XM";
        case Mode::SP: return "SP";
    }
    return "?";
}

double string_distance(const std::string& query_text, const store::EntityProfile& entity) {
    if (entity.title_literals.empty()) return 1.0;
    const auto q = to_codepoints(lower_utf8(query_text));
    const auto t = to_codepoints(lower_utf8(entity.title_literals.front()));
    const size_t denom = std::max(q.size(), t.size());
    if (denom == 0) return 0.0;
    return static_cast<double>(levenshtein(q, t)) / static_cast<double>(denom);
}

double query_biased_sim(double phi_candidate, double phi_source, double feature_dist,
                        const RankingParams& params) {
    const double ratio = phi_candidate / std::max(params.epsilon, phi_source);
    return params.lambda_sim * ratio + (1.0 - params.lambda_sim) * feature_dist;
}

std::optional<double> context_score(const std::vector<std::string>& context_terms,
                                    const store::EntityProfile& entity) {
    if (context_terms.empty()) return std::nullopt;
    std::set<std::string> title_tokens;
    for (const auto& title : entity.title_literals)
        for (auto& tok : index::tokenize(title)) title_tokens.insert(std::move(tok));
    size_t hits = 0;
    for (const auto& term : context_terms)
        if (title_tokens.count(term)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(context_terms.size());
}

double combine_alpha(double rank_score, double gamma, std::optional<double> context,
                     double lambda) {
    const double base = rank_score * gamma;
    if (!context) return base;
    return lambda * base + (1.0 - lambda) * *context;
}

Retriever::Retriever(const store::EntityStore* store, const index::TextIndex* index,
                     const affinity::AffinityModel* affinity, index::Bm25fParams bm25,
                     RankingParams params)
    : store_(store), index_(index), affinity_(affinity), bm25_(bm25), params_(params) {
    store_->for_each([&](const store::EntityProfile& p) {
        for (const auto& title : p.title_literals)
            title_phrases_.insert(index::join_tokens(index::tokenize(title)));
    });
}

void Retriever::set_clusters(Mode mode, const cluster::ClusterMap* map) {
    if (mode == Mode::XM)
        xmeans_clusters_ = map;
    else if (mode == Mode::SP)
        spectral_clusters_ = map;
    else
        throw ConfigError("cluster artifacts apply to modes XM and SP only");
}

void Retriever::set_vectors(
    const std::map<std::string, std::map<std::string, features::FeatureVector>>* vectors_by_type) {
    vectors_ = vectors_by_type;
}

const store::EntityProfile& Retriever::profile(const std::string& uri) const {
    auto it = profile_cache_.find(uri);
    if (it == profile_cache_.end()) it = profile_cache_.emplace(uri, store_->get(uri)).first;
    return it->second;
}

const features::FeatureVector* Retriever::vector_for(const std::string& type,
                                                     const std::string& uri) const {
    if (!vectors_) return nullptr;
    const auto tit = vectors_->find(type);
    if (tit == vectors_->end()) return nullptr;
    const auto vit = tit->second.find(uri);
    return vit == tit->second.end() ? nullptr : &vit->second;
}

std::string Retriever::infer_query_type(const std::vector<std::string>& span_tokens) const {
    const auto top = index_->search(span_tokens, index::FieldMode::TitleOnly, 10, bm25_);
    std::map<std::string, int> votes;
    for (const auto& r : top)
        for (const auto& t : profile(r.uri).types) ++votes[t];
    std::string best = store::kUntypedType;
    int best_votes = 0;
    for (const auto& [type, n] : votes) {
        if (n > best_votes) {  // ties keep the lexicographically smallest
            best_votes = n;
            best = type;
        }
    }
    return best;
}

QueryAnalysis Retriever::analyze(const QueryRecord& query) const {
    const auto tokens = index::tokenize(query.text);
    if (tokens.empty()) throw InputParseError("empty query: " + query.id);

    QueryAnalysis out;
    bool found = false;
    for (size_t len = tokens.size(); len >= 1 && !found; --len) {
        for (size_t start = 0; start + len <= tokens.size(); ++start) {
            std::vector<std::string> span(tokens.begin() + static_cast<ptrdiff_t>(start),
                                          tokens.begin() + static_cast<ptrdiff_t>(start + len));
            if (title_phrases_.count(index::join_tokens(span))) {
                out.span_tokens = std::move(span);
                for (size_t i = 0; i < start; ++i) out.context_terms.push_back(tokens[i]);
                for (size_t i = start + len; i < tokens.size(); ++i)
                    out.context_terms.push_back(tokens[i]);
                found = true;
                break;
            }
        }
    }
    if (!found) {
        out.span_tokens = tokens;
        out.context_terms.clear();
    }

    if (!query.annotated_type.empty()) {
        out.query_type = query.annotated_type;
        out.type_inferred = false;
    } else {
        out.query_type = infer_query_type(out.span_tokens);
        out.type_inferred = true;
    }
    return out;
}

std::vector<ExpandedCandidate> Retriever::expand(const QueryRecord& query,
                                                 const std::vector<index::ScoredEntity>& baseline,
                                                 const cluster::ClusterMap& map) const {
    std::set<std::string> in_baseline;
    for (const auto& r : baseline) in_baseline.insert(r.uri);

    std::map<std::string, ExpandedCandidate> best;  // uri -> winning candidate
    for (const auto& eb : baseline) {
        const double phi_b = string_distance(query.text, profile(eb.uri));
        for (const auto& cluster_id : map.clusters_of(eb.uri)) {
            const auto& rec = map.record(cluster_id);
            if (static_cast<int>(rec.members.size()) > params_.cluster_size_max) continue;

            const features::FeatureVector* vb = vector_for(rec.entity_type, eb.uri);
            const features::FeatureVector empty_vec;

            std::vector<ExpandedCandidate> scored;
            for (const auto& uri : rec.members) {
                if (uri == eb.uri) continue;
                const features::FeatureVector* vc = vector_for(rec.entity_type, uri);
                const double d = features::distance(vb ? *vb : empty_vec, vc ? *vc : empty_vec);
                const double phi_c = string_distance(query.text, profile(uri));
                ExpandedCandidate cand;
                cand.uri = uri;
                cand.source_entity = eb.uri;
                cand.source_rank = eb.rank;
                cand.cluster_id = cluster_id;
                cand.sim = query_biased_sim(phi_c, phi_b, d, params_);
                scored.push_back(std::move(cand));
            }
            std::sort(scored.begin(), scored.end(),
                      [](const ExpandedCandidate& a, const ExpandedCandidate& b) {
                          if (a.sim != b.sim) return a.sim < b.sim;
                          return a.uri < b.uri;
                      });
            const size_t take = std::min<size_t>(scored.size(),
                                                 static_cast<size_t>(params_.per_cluster));
            for (size_t i = 0; i < take; ++i) {
                ExpandedCandidate& cand = scored[i];
                if (in_baseline.count(cand.uri)) continue;
                const auto it = best.find(cand.uri);
                if (it == best.end()) {
                    best.emplace(cand.uri, std::move(cand));
                } else if (cand.sim < it->second.sim ||
                           (cand.sim == it->second.sim &&
                            cand.source_rank < it->second.source_rank)) {
                    it->second = std::move(cand);
                }
            }
        }
    }

    std::vector<ExpandedCandidate> out;
    out.reserve(best.size());
    for (auto& [uri, cand] : best) {
        (void)uri;
        out.push_back(std::move(cand));
    }
    return out;
}

std::vector<LinkCandidate> Retriever::s1_expand(
    const std::vector<index::ScoredEntity>& baseline_normalized) const {
    const auto& adj = store_->similarity_adjacency();
    std::set<std::string> in_baseline;
    for (const auto& r : baseline_normalized) in_baseline.insert(r.uri);

    std::map<std::string, LinkCandidate> best;
    for (const auto& eb : baseline_normalized) {
        // BFS over the undirected similarity graph up to s1_depth hops.
        std::map<std::string, int> hop{{eb.uri, 0}};
        std::deque<std::string> frontier{eb.uri};
        while (!frontier.empty()) {
            const std::string cur = std::move(frontier.front());
            frontier.pop_front();
            const int h = hop[cur];
            if (h >= params_.s1_depth) continue;
            const auto it = adj.find(cur);
            if (it == adj.end()) continue;
            for (const auto& nbr : it->second) {
                if (hop.count(nbr)) continue;
                hop[nbr] = h + 1;
                frontier.push_back(nbr);
                if (in_baseline.count(nbr)) continue;
                LinkCandidate cand;
                cand.uri = nbr;
                cand.source_entity = eb.uri;
                cand.source_rank = eb.rank;
                cand.score = eb.score / static_cast<double>(h + 1);
                const auto bit = best.find(nbr);
                if (bit == best.end())
                    best.emplace(nbr, std::move(cand));
                else if (cand.score > bit->second.score)
                    bit->second = std::move(cand);
            }
        }
    }

    std::vector<LinkCandidate> out;
    out.reserve(best.size());
    for (auto& [uri, cand] : best) {
        (void)uri;
        out.push_back(std::move(cand));
    }
    return out;
}

std::vector<RankedResult> Retriever::final_rank(const QueryRecord& query, Mode mode,
                                                index::FieldMode field_mode, size_t k) const {
    const auto tokens = index::tokenize(query.text);
    if (tokens.empty()) return {};
    const QueryAnalysis analysis = analyze(query);

    auto baseline = index_->search(tokens, field_mode, k, bm25_);
    if (baseline.empty()) return {};
    index::normalize_scores(baseline);

    struct Scored {
        std::string uri;
        double rank_score;
        RankedResult::Origin origin;
    };
    std::vector<Scored> pool;
    for (const auto& r : baseline)
        pool.push_back({r.uri, r.score, RankedResult::Origin::Baseline});

    if (mode == Mode::S1) {
        for (const auto& cand : s1_expand(baseline))
            pool.push_back({cand.uri, cand.score, RankedResult::Origin::LinkExpanded});
    } else if (mode == Mode::XM || mode == Mode::SP) {
        const cluster::ClusterMap* map = mode == Mode::XM ? xmeans_clusters_ : spectral_clusters_;
        if (!map)
            throw MissingArtifactError("cluster artifacts not loaded for mode " + mode_name(mode));
        const auto candidates = expand(query, baseline, *map);
        double lo = 0.0, hi = 0.0;
        if (!candidates.empty()) {
            lo = hi = candidates.front().sim;
            for (const auto& c : candidates) {
                lo = std::min(lo, c.sim);
                hi = std::max(hi, c.sim);
            }
        }
        for (const auto& c : candidates) {
            double rank_score;
            if (params_.literal_rank_score) {
                rank_score = c.sim / static_cast<double>(c.source_rank);
            } else {
                const double sim_norm = hi > lo ? (c.sim - lo) / (hi - lo) : 0.0;
                rank_score = (1.0 - sim_norm) / static_cast<double>(c.source_rank);
            }
            pool.push_back({c.uri, rank_score, RankedResult::Origin::Expanded});
        }
    }

    std::vector<RankedResult> out;
    out.reserve(pool.size());
    for (const auto& s : pool) {
        const auto& prof = profile(s.uri);
        const double g = affinity_->entity_gamma(prof, analysis.query_type);
        const auto ctx = context_score(analysis.context_terms, prof);
        RankedResult r;
        r.uri = s.uri;
        r.origin = s.origin;
        r.alpha = combine_alpha(s.rank_score, g, ctx, params_.lambda_alpha);
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const RankedResult& a, const RankedResult& b) {
        if (a.alpha != b.alpha) return a.alpha > b.alpha;
        return a.uri < b.uri;
    });
    if (out.size() > k) out.resize(k);
    for (size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

std::vector<QueryRecord> load_queries(const std::filesystem::path& file) {
    require_artifact(file, "synth or an external query file");
    std::vector<QueryRecord> out;
    LineReader r(file);
    std::string line;
    size_t line_no = 0;
    while (r.next(line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_tabs(line);
        if (f.size() < 2)
            throw InputParseError(file.string() + ":" + std::to_string(line_no) +
                                  ": expected qid<TAB>text[<TAB>query_type]");
        QueryRecord q;
        q.id = f[0];
        q.text = f[1];
        if (f.size() >= 3) q.annotated_type = f[2];
        out.push_back(std::move(q));
    }
    return out;
}

std::string format_run(const std::string& query_id, const std::vector<RankedResult>& results,
                       const std::string& tag) {
    std::ostringstream out;
    for (const auto& r : results)
        out << query_id << " Q0 " << r.uri << ' ' << r.rank << ' ' << format_double(r.alpha) << ' '
            << tag << '\n';
    return out.str();
}

}  // namespace entrex::retrieval
