#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace entrex::cluster {

struct ClusterRecord {
    std::string cluster_id;
    std::string entity_type;
    std::string bucket_id;
    std::string algorithm;  // "xmeans" | "spectral"
    std::vector<std::string> members;  // sorted
};

// clusters-<algo>.tsv: cluster_id <TAB> entity_type <TAB> bucket_id <TAB> uri
void save_clusters(const std::vector<ClusterRecord>& records, const std::filesystem::path& file);
std::vector<ClusterRecord> load_clusters(const std::string& algorithm,
                                         const std::filesystem::path& file);

// Inverted map file uri -> comma-separated cluster ids, plus the in-memory
// lookup used by the expansion step.
void save_cluster_inverse(const std::vector<ClusterRecord>& records,
                          const std::filesystem::path& file);

class ClusterMap {
public:
    explicit ClusterMap(std::vector<ClusterRecord> records);

    // Cluster ids containing the uri, in id order.
    const std::vector<std::string>& clusters_of(const std::string& uri) const;
    const ClusterRecord& record(const std::string& cluster_id) const;
    const std::vector<ClusterRecord>& records() const { return records_; }

private:
    std::vector<ClusterRecord> records_;
    std::map<std::string, size_t> by_id_;
    std::map<std::string, std::vector<std::string>> by_uri_;
    std::vector<std::string> empty_;
};

}  // namespace entrex::cluster
