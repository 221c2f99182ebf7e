#include "entrex/cluster/records.hpp"

#include <algorithm>
#include <sstream>

#include "entrex/core/io.hpp"

namespace entrex::cluster {

void save_clusters(const std::vector<ClusterRecord>& records, const std::filesystem::path& file) {
    std::ostringstream out;
    for (const auto& r : records)
        for (const auto& uri : r.members)
            out << r.cluster_id << '\t' << r.entity_type << '\t' << r.bucket_id << '\t' << uri
                << '\n';
    write_file(file, out.str());
}

std::vector<ClusterRecord> load_clusters(const std::string& algorithm,
                                         const std::filesystem::path& file) {
    require_artifact(file, "cluster");
    std::map<std::string, ClusterRecord> by_id;
    LineReader r(file);
    std::string line;
    while (r.next(line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        ClusterRecord& rec = by_id[f[0]];
        rec.cluster_id = f[0];
        rec.entity_type = f[1];
        rec.bucket_id = f[2];
        rec.algorithm = algorithm;
        rec.members.push_back(f[3]);
    }
    std::vector<ClusterRecord> out;
    out.reserve(by_id.size());
    for (auto& [id, rec] : by_id) {
        (void)id;
        std::sort(rec.members.begin(), rec.members.end());
        out.push_back(std::move(rec));
    }
    return out;
}

void save_cluster_inverse(const std::vector<ClusterRecord>& records,
                          const std::filesystem::path& file) {
    std::map<std::string, std::vector<std::string>> by_uri;
    for (const auto& r : records)
        for (const auto& uri : r.members) by_uri[uri].push_back(r.cluster_id);
    std::ostringstream out;
    for (auto& [uri, ids] : by_uri) {
        std::sort(ids.begin(), ids.end());
        out << uri << '\t';
        for (size_t i = 0; i < ids.size(); ++i) {
            if (i) out << ',';
            out << ids[i];
        }
        out << '\n';
    }
    write_file(file, out.str());
}

ClusterMap::ClusterMap(std::vector<ClusterRecord> records) : records_(std::move(records)) {
    for (size_t i = 0; i < records_.size(); ++i) {
        by_id_[records_[i].cluster_id] = i;
        for (const auto& uri : records_[i].members) by_uri_[uri].push_back(records_[i].cluster_id);
    }
    for (auto& [uri, ids] : by_uri_) {
        (void)uri;
        std::sort(ids.begin(), ids.end());
    }
}

const std::vector<std::string>& ClusterMap::clusters_of(const std::string& uri) const {
    const auto it = by_uri_.find(uri);
    return it == by_uri_.end() ? empty_ : it->second;
}

const ClusterRecord& ClusterMap::record(const std::string& cluster_id) const {
    return records_[by_id_.at(cluster_id)];
}

}  // namespace entrex::cluster
