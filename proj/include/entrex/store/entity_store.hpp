#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "entrex/rdf/ntriples.hpp"

namespace entrex::store {

// Pseudo-type assigned to entities that carry no rdf:type triple.
inline constexpr const char* kUntypedType = "urn:entrex:untyped";

inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// Predicates treated as explicit similarity statements (owl:sameAs family).
const std::vector<std::string>& similarity_predicates();

// Default title predicate set; configurable at assemble time.
const std::vector<std::string>& default_title_predicates();

struct EntityProfile {
    std::string uri;
    std::vector<std::string> types;           // sorted, unique
    std::vector<std::string> title_literals;  // subset of body_literals
    std::vector<std::string> body_literals;   // every literal lexical form
    std::vector<std::pair<std::string, std::string>> object_properties;  // sorted, unique

    bool operator==(const EntityProfile&) const = default;
};

struct StoreManifest {
    uint64_t entity_count = 0;
    std::map<std::string, uint64_t> type_histogram;
    std::vector<std::string> title_predicates;
};

// Builds profiles from a quad sequence and persists them under dir as
// profiles.dat / profiles.idx / manifest.json. Duplicate triples are
// deduplicated; literal lists are ordered by (predicate, lexical, lang,
// datatype) so assembly is order-invariant.
StoreManifest assemble(const std::function<std::optional<rdf::Quad>()>& next_quad,
                       const std::filesystem::path& dir,
                       const std::vector<std::string>& title_predicates =
                           default_title_predicates());

struct GraphStats {
    uint64_t similarity_statements = 0;
    uint64_t object_property_statements = 0;  // includes the similarity ones
};

// Per-graph counts of explicit similarity statements vs all IRI-object
// triples. The default graph is keyed by the empty string.
std::map<std::string, GraphStats> corpus_stats(
    const std::function<std::optional<rdf::Quad>()>& next_quad);

class EntityStore {
public:
    static EntityStore open(const std::filesystem::path& dir);

    // Throws UnknownUriError.
    EntityProfile get(const std::string& uri) const;
    std::optional<EntityProfile> find(const std::string& uri) const;
    bool contains(const std::string& uri) const { return offsets_.count(uri) > 0; }

    // Visits every profile in lexicographic uri order.
    void for_each(const std::function<void(const EntityProfile&)>& fn) const;
    std::vector<EntityProfile> by_type(const std::string& type) const;

    const StoreManifest& manifest() const { return manifest_; }
    size_t size() const { return offsets_.size(); }

    // Undirected adjacency over the explicit-similarity predicates, built
    // lazily by a full scan and cached. Neighbor lists are sorted.
    const std::map<std::string, std::vector<std::string>>& similarity_adjacency() const;

private:
    std::filesystem::path dir_;
    std::map<std::string, uint64_t> offsets_;
    StoreManifest manifest_;
    mutable std::optional<std::map<std::string, std::vector<std::string>>> sim_adj_;
};

// Record codec, exposed for tests.
std::string encode_profile(const EntityProfile& p);
EntityProfile decode_profile(const std::string& record);

}  // namespace entrex::store
