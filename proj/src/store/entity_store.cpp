#include "entrex/store/entity_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "entrex/core/io.hpp"

namespace entrex::store {

using json = nlohmann::ordered_json;

const std::vector<std::string>& similarity_predicates() {
    static const std::vector<std::string> preds = {
        "http://www.w3.org/2002/07/owl#sameAs",
        "http://www.w3.org/2004/02/skos/core#related",
        "http://dbpedia.org/property/wikiPageExternalLink",
        "http://dbpedia.org/ontology/wikiPageExternalLink",
        "http://dbpedia.org/property/wikiPageDisambiguates",
        "http://dbpedia.org/ontology/wikiPageDisambiguates",
        "http://dbpedia.org/property/synonym",
        "http://dbpedia.org/ontology/synonym",
    };
    return preds;
}

const std::vector<std::string>& default_title_predicates() {
    static const std::vector<std::string> preds = {
        "http://www.w3.org/2000/01/rdf-schema#label",
        "http://xmlns.com/foaf/0.1/name",
        "http://purl.org/dc/elements/1.1/title",
        "http://purl.org/dc/terms/title",
        "http://www.w3.org/2004/02/skos/core#prefLabel",
    };
    return preds;
}

namespace {

bool is_similarity_predicate(const std::string& p) {
    const auto& preds = similarity_predicates();
    return std::find(preds.begin(), preds.end(), p) != preds.end();
}

// Literal triple key used for dedup and canonical ordering.
using LiteralTriple = std::tuple<std::string, std::string, std::string, std::string>;

struct ProfileBuilder {
    std::set<std::string> types;
    std::set<LiteralTriple> literals;  // (predicate, lexical, lang, datatype)
    std::set<std::pair<std::string, std::string>> object_properties;
};

void append_field(std::string& out, const std::string& v) {
    out += std::to_string(v.size());
    out.push_back(':');
    out += v;
}

std::string take_field(const std::string& rec, size_t& pos) {
    const size_t colon = rec.find(':', pos);
    if (colon == std::string::npos) throw InternalError("corrupt profile record");
    const size_t len = std::stoull(rec.substr(pos, colon - pos));
    pos = colon + 1 + len;
    return rec.substr(colon + 1, len);
}

uint64_t take_count(const std::string& rec, size_t& pos) {
    const size_t sp = rec.find(' ', pos);
    if (sp == std::string::npos) throw InternalError("corrupt profile record");
    const uint64_t n = std::stoull(rec.substr(pos, sp - pos));
    pos = sp + 1;
    return n;
}

}  // namespace

std::string encode_profile(const EntityProfile& p) {
    std::string out;
    append_field(out, p.uri);
    auto block = [&out](const std::vector<std::string>& items) {
        out.push_back(' ');
        out += std::to_string(items.size());
        out.push_back(' ');
        for (const auto& s : items) append_field(out, s);
    };
    block(p.types);
    block(p.title_literals);
    block(p.body_literals);
    out.push_back(' ');
    out += std::to_string(p.object_properties.size());
    out.push_back(' ');
    for (const auto& [pred, obj] : p.object_properties) {
        append_field(out, pred);
        append_field(out, obj);
    }
    return out;
}

EntityProfile decode_profile(const std::string& rec) {
    EntityProfile p;
    size_t pos = 0;
    p.uri = take_field(rec, pos);
    ++pos;  // space
    auto block = [&](std::vector<std::string>& items) {
        const uint64_t n = take_count(rec, pos);
        items.reserve(n);
        for (uint64_t i = 0; i < n; ++i) items.push_back(take_field(rec, pos));
        ++pos;  // space
    };
    block(p.types);
    block(p.title_literals);
    block(p.body_literals);
    const uint64_t n_props = take_count(rec, pos);
    p.object_properties.reserve(n_props);
    for (uint64_t i = 0; i < n_props; ++i) {
        std::string pred = take_field(rec, pos);
        std::string obj = take_field(rec, pos);
        p.object_properties.emplace_back(std::move(pred), std::move(obj));
    }
    return p;
}

StoreManifest assemble(const std::function<std::optional<rdf::Quad>()>& next_quad,
                       const std::filesystem::path& dir,
                       const std::vector<std::string>& title_predicates) {
    if (title_predicates.empty()) throw ConfigError("title predicate set must be non-empty");
    ensure_dir(dir);

    std::map<std::string, ProfileBuilder> builders;
    while (auto q = next_quad()) {
        ProfileBuilder& b = builders[q->subject];
        if (q->object_is_iri) {
            if (q->predicate == kRdfType)
                b.types.insert(q->object_iri);
            else
                b.object_properties.emplace(q->predicate, q->object_iri);
        } else {
            b.literals.emplace(q->predicate, q->object_literal.lexical, q->object_literal.lang,
                               q->object_literal.datatype);
        }
    }

    const std::set<std::string> title_preds(title_predicates.begin(), title_predicates.end());
    StoreManifest manifest;
    manifest.title_predicates.assign(title_preds.begin(), title_preds.end());

    std::ofstream dat(dir / "profiles.dat", std::ios::binary | std::ios::trunc);
    std::ofstream idx(dir / "profiles.idx", std::ios::binary | std::ios::trunc);
    if (!dat || !idx) throw InternalError("cannot write store files in " + dir.string());

    uint64_t offset = 0;
    for (const auto& [uri, b] : builders) {
        EntityProfile p;
        p.uri = uri;
        p.types.assign(b.types.begin(), b.types.end());
        if (p.types.empty()) p.types.push_back(kUntypedType);
        for (const auto& [pred, lexical, lang, dt] : b.literals) {
            p.body_literals.push_back(lexical);
            if (title_preds.count(pred)) p.title_literals.push_back(lexical);
        }
        p.object_properties.assign(b.object_properties.begin(), b.object_properties.end());

        const std::string rec = encode_profile(p);
        dat << rec << '\n';
        idx << uri << '\t' << offset << '\n';
        offset += rec.size() + 1;

        ++manifest.entity_count;
        for (const auto& t : p.types) ++manifest.type_histogram[t];
    }
    dat.close();
    idx.close();

    json j;
    j["entity_count"] = manifest.entity_count;
    j["type_histogram"] = json::object();
    for (const auto& [t, n] : manifest.type_histogram) j["type_histogram"][t] = n;
    j["title_predicates"] = manifest.title_predicates;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
    return manifest;
}

std::map<std::string, GraphStats> corpus_stats(
    const std::function<std::optional<rdf::Quad>()>& next_quad) {
    std::map<std::string, GraphStats> stats;
    while (auto q = next_quad()) {
        if (!q->object_is_iri) continue;
        GraphStats& g = stats[q->graph];
        ++g.object_property_statements;
        if (is_similarity_predicate(q->predicate)) ++g.similarity_statements;
    }
    return stats;
}

EntityStore EntityStore::open(const std::filesystem::path& dir) {
    require_artifact(dir / "profiles.dat", "ingest");
    require_artifact(dir / "profiles.idx", "ingest");
    require_artifact(dir / "manifest.json", "ingest");

    EntityStore s;
    s.dir_ = dir;
    LineReader idx(dir / "profiles.idx");
    std::string line;
    while (idx.next(line)) {
        if (line.empty()) continue;
        const size_t tab = line.rfind('\t');
        s.offsets_[line.substr(0, tab)] = std::stoull(line.substr(tab + 1));
    }
    const json j = json::parse(read_file(dir / "manifest.json"));
    s.manifest_.entity_count = j.at("entity_count").get<uint64_t>();
    for (const auto& [k, v] : j.at("type_histogram").items())
        s.manifest_.type_histogram[k] = v.get<uint64_t>();
    s.manifest_.title_predicates = j.at("title_predicates").get<std::vector<std::string>>();
    return s;
}

std::optional<EntityProfile> EntityStore::find(const std::string& uri) const {
    const auto it = offsets_.find(uri);
    if (it == offsets_.end()) return std::nullopt;
    std::ifstream dat(dir_ / "profiles.dat", std::ios::binary);
    dat.seekg(static_cast<std::streamoff>(it->second));
    std::string rec;
    std::getline(dat, rec);
    return decode_profile(rec);
}

EntityProfile EntityStore::get(const std::string& uri) const {
    auto p = find(uri);
    if (!p) throw UnknownUriError("unknown entity uri: " + uri);
    return *std::move(p);
}

void EntityStore::for_each(const std::function<void(const EntityProfile&)>& fn) const {
    std::ifstream dat(dir_ / "profiles.dat", std::ios::binary);
    std::string rec;
    while (std::getline(dat, rec)) {
        if (rec.empty()) continue;
        fn(decode_profile(rec));
    }
}

std::vector<EntityProfile> EntityStore::by_type(const std::string& type) const {
    std::vector<EntityProfile> out;
    for_each([&](const EntityProfile& p) {
        if (std::find(p.types.begin(), p.types.end(), type) != p.types.end()) out.push_back(p);
    });
    return out;
}

const std::map<std::string, std::vector<std::string>>& EntityStore::similarity_adjacency() const {
    if (!sim_adj_) {
        std::map<std::string, std::set<std::string>> adj;
        for_each([&](const EntityProfile& p) {
            for (const auto& [pred, obj] : p.object_properties) {
                if (!is_similarity_predicate(pred)) continue;
                adj[p.uri].insert(obj);
                adj[obj].insert(p.uri);
            }
        });
        std::map<std::string, std::vector<std::string>> out;
        for (auto& [uri, nbrs] : adj) out[uri].assign(nbrs.begin(), nbrs.end());
        sim_adj_ = std::move(out);
    }
    return *sim_adj_;
}

}  // namespace entrex::store
