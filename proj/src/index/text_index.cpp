#include "entrex/index/text_index.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entrex/core/io.hpp"
#include "entrex/index/tokenizer.hpp"
#include "entrex/kernels/kernels.hpp"

namespace entrex::index {

using json = nlohmann::ordered_json;

FieldMode parse_field_mode(const std::string& name) {
    if (name == "title") return FieldMode::TitleOnly;
    if (name == "body") return FieldMode::BodyOnly;
    if (name == "both") return FieldMode::Both;
    throw ConfigError("unknown field mode: " + name + " (expected title|body|both)");
}

std::string field_mode_suffix(FieldMode mode) {
    switch (mode) {
        case FieldMode::TitleOnly: return "t";
        case FieldMode::BodyOnly: return "b";
        case FieldMode::Both: return "tb";
    }
    return "?";
}

TextIndex TextIndex::build(const store::EntityStore& s) {
    TextIndex idx;

    // Document table in store (uri) order.
    std::vector<std::pair<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>>>
        docs;
    s.for_each([&](const store::EntityProfile& p) {
        std::vector<std::string> title_tokens;
        for (const auto& t : p.title_literals) {
            auto toks = tokenize(t);
            title_tokens.insert(title_tokens.end(), toks.begin(), toks.end());
        }
        std::vector<std::string> body_tokens;
        for (const auto& t : p.body_literals) {
            auto toks = tokenize(t);
            body_tokens.insert(body_tokens.end(), toks.begin(), toks.end());
        }
        docs.push_back({p.uri, {std::move(title_tokens), std::move(body_tokens)}});
    });

    uint64_t total_title = 0, total_body = 0;
    for (uint32_t d = 0; d < docs.size(); ++d) {
        const auto& [uri, fields] = docs[d];
        const auto& [title, body] = fields;
        idx.doc_uris_.push_back(uri);
        idx.title_len_.push_back(static_cast<uint32_t>(title.size()));
        idx.body_len_.push_back(static_cast<uint32_t>(body.size()));
        total_title += title.size();
        total_body += body.size();

        std::map<std::string, std::pair<uint32_t, uint32_t>> tf;  // term -> (title, body)
        for (const auto& t : title) ++tf[t].first;
        for (const auto& t : body) ++tf[t].second;
        for (const auto& [term, counts] : tf)
            idx.postings_[term].push_back({d, counts.first, counts.second});
    }
    const double n = docs.empty() ? 1.0 : static_cast<double>(docs.size());
    idx.avg_title_len_ = static_cast<double>(total_title) / n;
    idx.avg_body_len_ = static_cast<double>(total_body) / n;
    return idx;
}

void TextIndex::save(const std::filesystem::path& dir) const {
    ensure_dir(dir);
    {
        std::ostringstream doclens;
        for (size_t d = 0; d < doc_uris_.size(); ++d)
            doclens << doc_uris_[d] << '\t' << title_len_[d] << '\t' << body_len_[d] << '\n';
        write_file(dir / "doclens.dat", doclens.str());
    }
    std::ostringstream dict, posts;
    uint64_t offset = 0;
    for (const auto& [term, plist] : postings_) {
        std::ostringstream block;
        for (const auto& p : plist) block << p.doc << ' ' << p.tf_title << ' ' << p.tf_body << '\n';
        const std::string s = block.str();
        dict << term << '\t' << plist.size() << '\t' << offset << '\t' << s.size() << '\n';
        posts << s;
        offset += s.size();
    }
    write_file(dir / "dictionary.dat", dict.str());
    write_file(dir / "postings.dat", posts.str());
    json stats;
    stats["entity_count"] = doc_uris_.size();
    stats["avg_title_len"] = avg_title_len_;
    stats["avg_body_len"] = avg_body_len_;
    write_file(dir / "stats.json", stats.dump(2) + "\n");
}

TextIndex TextIndex::load(const std::filesystem::path& dir) {
    require_artifact(dir / "dictionary.dat", "index");
    require_artifact(dir / "postings.dat", "index");
    require_artifact(dir / "doclens.dat", "index");
    require_artifact(dir / "stats.json", "index");

    TextIndex idx;
    {
        LineReader r(dir / "doclens.dat");
        std::string line;
        while (r.next(line)) {
            if (line.empty()) continue;
            auto f = split_tabs(line);
            idx.doc_uris_.push_back(f[0]);
            idx.title_len_.push_back(static_cast<uint32_t>(std::stoul(f[1])));
            idx.body_len_.push_back(static_cast<uint32_t>(std::stoul(f[2])));
        }
    }
    const std::string posts = read_file(dir / "postings.dat");
    LineReader r(dir / "dictionary.dat");
    std::string line;
    while (r.next(line)) {
        if (line.empty()) continue;
        auto f = split_tabs(line);
        const uint64_t offset = std::stoull(f[2]);
        const uint64_t len = std::stoull(f[3]);
        std::istringstream block(posts.substr(offset, len));
        auto& plist = idx.postings_[f[0]];
        Posting p;
        while (block >> p.doc >> p.tf_title >> p.tf_body) plist.push_back(p);
    }
    const json stats = json::parse(read_file(dir / "stats.json"));
    idx.avg_title_len_ = stats.at("avg_title_len").get<double>();
    idx.avg_body_len_ = stats.at("avg_body_len").get<double>();
    return idx;
}

namespace {

double field_component(double w, double b, uint32_t tf, uint32_t len, double avglen) {
    if (w <= 0.0 || tf == 0) return 0.0;
    // Degenerate corpora can have an all-empty field.
    const double ratio = avglen > 0.0 ? static_cast<double>(len) / avglen : 1.0;
    return w * static_cast<double>(tf) / (1.0 + b * (ratio - 1.0));
}

const Posting* find_posting(const std::vector<Posting>& plist, uint32_t doc) {
    const auto it = std::lower_bound(plist.begin(), plist.end(), doc,
                                     [](const Posting& p, uint32_t d) { return p.doc < d; });
    return (it != plist.end() && it->doc == doc) ? &*it : nullptr;
}

}  // namespace

double TextIndex::score_doc(uint32_t doc, const std::vector<const std::vector<Posting>*>& plists,
                            const std::vector<double>& idfs, const Bm25fParams& params,
                            FieldMode mode) const {
    const double w_title = mode == FieldMode::BodyOnly ? 0.0 : params.w_title;
    const double w_body = mode == FieldMode::TitleOnly ? 0.0 : params.w_body;
    double score = 0.0;
    for (size_t t = 0; t < plists.size(); ++t) {
        if (!plists[t]) continue;
        const Posting* p = find_posting(*plists[t], doc);
        if (!p) continue;
        const double s =
            field_component(w_title, params.b_title, p->tf_title, title_len_[doc], avg_title_len_) +
            field_component(w_body, params.b_body, p->tf_body, body_len_[doc], avg_body_len_);
        if (s > 0.0) score += idfs[t] * s / (params.k1 + s);
    }
    return score;
}

void TextIndex::prepare_terms(const std::vector<std::string>& query_tokens,
                              std::vector<const std::vector<Posting>*>& plists,
                              std::vector<double>& idfs) const {
    const double n = static_cast<double>(doc_uris_.size());
    for (const auto& term : query_tokens) {
        const auto pit = postings_.find(term);
        plists.push_back(pit == postings_.end() ? nullptr : &pit->second);
        const double df = pit == postings_.end() ? 0.0 : static_cast<double>(pit->second.size());
        idfs.push_back(std::log(1.0 + (n - df + 0.5) / (df + 0.5)));
    }
}

double TextIndex::bm25f_score(const std::vector<std::string>& query_tokens, const std::string& uri,
                              const Bm25fParams& params, FieldMode mode) const {
    const auto it = std::lower_bound(doc_uris_.begin(), doc_uris_.end(), uri);
    if (it == doc_uris_.end() || *it != uri) throw UnknownUriError("not indexed: " + uri);
    const auto doc = static_cast<uint32_t>(it - doc_uris_.begin());

    std::vector<const std::vector<Posting>*> plists;
    std::vector<double> idfs;
    prepare_terms(query_tokens, plists, idfs);
    return score_doc(doc, plists, idfs, params, mode);
}

std::vector<uint32_t> TextIndex::gather_candidates(
    const std::vector<std::string>& query_tokens) const {
    std::vector<uint32_t> docs;
    for (const auto& term : query_tokens) {
        const auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        for (const auto& p : it->second) docs.push_back(p.doc);
    }
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    return docs;
}

std::vector<double> TextIndex::score_candidates_serial(
    const std::vector<std::string>& query_tokens, const std::vector<uint32_t>& candidates,
    const Bm25fParams& params, FieldMode mode) const {
    std::vector<const std::vector<Posting>*> plists;
    std::vector<double> idfs;
    prepare_terms(query_tokens, plists, idfs);
    std::vector<double> scores(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i)
        scores[i] = score_doc(candidates[i], plists, idfs, params, mode);
    return scores;
}

std::vector<double> TextIndex::score_candidates(const std::vector<std::string>& query_tokens,
                                                const std::vector<uint32_t>& candidates,
                                                const Bm25fParams& params, FieldMode mode) const {
    std::vector<const std::vector<Posting>*> plists;
    std::vector<double> idfs;
    prepare_terms(query_tokens, plists, idfs);
    std::vector<double> scores(candidates.size());
    const auto m = static_cast<int64_t>(candidates.size());
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads())
    for (int64_t i = 0; i < m; ++i)
        scores[static_cast<size_t>(i)] =
            score_doc(candidates[static_cast<size_t>(i)], plists, idfs, params, mode);
    return scores;
}

std::vector<ScoredEntity> TextIndex::search(const std::vector<std::string>& query_tokens,
                                            FieldMode mode, size_t k,
                                            const Bm25fParams& params) const {
    std::vector<ScoredEntity> out;
    if (query_tokens.empty() || k == 0) return out;
    const auto candidates = gather_candidates(query_tokens);
    const auto scores = score_candidates(query_tokens, candidates, params, mode);
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (scores[i] <= 0.0) continue;
        out.push_back({doc_uris_[candidates[i]], scores[i], 0});
    }
    std::sort(out.begin(), out.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.uri < b.uri;
    });
    if (out.size() > k) out.resize(k);
    for (size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

void normalize_scores(std::vector<ScoredEntity>& results) {
    if (results.empty()) throw InternalError("normalize_scores on an empty result list");
    double max = 0.0;
    for (const auto& r : results) max = std::max(max, r.score);
    for (auto& r : results) r.score = max > 0.0 ? r.score / max : 0.0;
}

}  // namespace entrex::index
