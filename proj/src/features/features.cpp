#include "entrex/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrex/core/io.hpp"
#include "entrex/core/text.hpp"
#include "entrex/index/tokenizer.hpp"

namespace entrex::features {

double FeatureVector::weight(const std::string& key) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), key,
        [](const std::pair<std::string, double>& e, const std::string& k) { return e.first < k; });
    return (it != entries.end() && it->first == key) ? it->second : 0.0;
}

std::vector<FeatureVector> build_vectors(const std::vector<store::EntityProfile>& entities) {
    const size_t n = entities.size();

    // Raw term counts per entity, then a df pass over the lexical features.
    std::vector<std::map<std::string, double>> tf(n);
    std::map<std::string, size_t> df;
    for (size_t i = 0; i < n; ++i) {
        auto& counts = tf[i];
        for (const auto& literal : entities[i].body_literals) {
            const auto tokens = index::tokenize(literal);
            for (const auto& t : tokens) counts["U:" + t] += 1.0;
            for (size_t j = 0; j + 1 < tokens.size(); ++j)
                counts["B:" + tokens[j] + " " + tokens[j + 1]] += 1.0;
        }
        for (const auto& [key, cnt] : counts) {
            (void)cnt;
            ++df[key];
        }
    }

    std::vector<FeatureVector> out(n);
    for (size_t i = 0; i < n; ++i) {
        out[i].uri = entities[i].uri;
        auto& entries = out[i].entries;
        for (const auto& [key, cnt] : tf[i]) {
            const double idf = std::log(static_cast<double>(n) / static_cast<double>(df[key]));
            const double w = cnt * idf;
            if (w > 0.0) entries.emplace_back(key, w);
        }
        for (const auto& [pred, obj] : entities[i].object_properties)
            entries.emplace_back("S:" + pred + "|" + obj, 1.0);
        std::sort(entries.begin(), entries.end());
    }
    return out;
}

void prune(std::vector<FeatureVector>& vectors, int min_entity_freq, double max_df_fraction) {
    const double n = static_cast<double>(vectors.size());
    std::map<std::string, size_t> df;
    for (const auto& v : vectors)
        for (const auto& [key, w] : v.entries) {
            (void)w;
            ++df[key];
        }
    for (auto& v : vectors) {
        std::erase_if(v.entries, [&](const std::pair<std::string, double>& e) {
            const auto d = static_cast<double>(df[e.first]);
            return d < static_cast<double>(min_entity_freq) || d > max_df_fraction * n;
        });
    }
}

double distance(const FeatureVector& a, const FeatureVector& b) {
    double sum = 0.0;
    size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        const int cmp = a.entries[i].first.compare(b.entries[j].first);
        if (cmp == 0) {
            const double d = a.entries[i].second - b.entries[j].second;
            sum += d * d;
            ++i;
            ++j;
        } else if (cmp < 0) {
            sum += a.entries[i].second * a.entries[i].second;
            ++i;
        } else {
            sum += b.entries[j].second * b.entries[j].second;
            ++j;
        }
    }
    for (; i < a.entries.size(); ++i) sum += a.entries[i].second * a.entries[i].second;
    for (; j < b.entries.size(); ++j) sum += b.entries[j].second * b.entries[j].second;
    return std::sqrt(sum);
}

void save_vectors(const std::vector<FeatureVector>& vectors, const std::filesystem::path& file) {
    std::ostringstream out;
    for (const auto& v : vectors) {
        out << v.uri;
        for (const auto& [key, w] : v.entries) out << '\t' << key << '\t' << format_double(w);
        out << '\n';
    }
    write_file(file, out.str());
}

std::vector<FeatureVector> load_vectors(const std::filesystem::path& file) {
    require_artifact(file, "features");
    std::vector<FeatureVector> out;
    LineReader r(file);
    std::string line;
    while (r.next(line)) {
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        FeatureVector v;
        v.uri = fields[0];
        for (size_t i = 1; i + 1 < fields.size(); i += 2)
            v.entries.emplace_back(fields[i], std::stod(fields[i + 1]));
        out.push_back(std::move(v));
    }
    return out;
}

std::map<std::string, FeatureVector> vector_map(std::vector<FeatureVector> vectors) {
    std::map<std::string, FeatureVector> m;
    for (auto& v : vectors) {
        std::string uri = v.uri;
        m.emplace(std::move(uri), std::move(v));
    }
    return m;
}

}  // namespace entrex::features
