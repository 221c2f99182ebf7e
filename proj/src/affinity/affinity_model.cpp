#include "entrex/affinity/affinity_model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "entrex/core/io.hpp"

namespace entrex::affinity {

using json = nlohmann::ordered_json;

namespace {
constexpr double kEps = 1e-9;
}

AffinityModel AffinityModel::train(const std::vector<TrainingJudgment>& judgments, double alpha) {
    if (judgments.empty()) throw ConfigError("affinity training set is empty");
    if (alpha < 0.0) throw ConfigError("smoothing alpha must be >= 0");

    std::map<std::string, std::map<std::string, double>> counts;  // t_q -> t_e -> count
    std::set<std::string> entity_type_set;
    for (const auto& j : judgments) {
        std::set<std::string> seen;  // each declared type once per entity
        for (const auto& t : j.entity_types) seen.insert(t);
        for (const auto& t : seen) {
            counts[j.query_type][t] += 1.0;
            entity_type_set.insert(t);
        }
    }

    AffinityModel m;
    m.alpha_ = alpha;
    m.entity_types_.assign(entity_type_set.begin(), entity_type_set.end());
    for (const auto& [tq, row] : counts) {
        (void)row;
        m.query_types_.push_back(tq);
    }

    const auto n_types = static_cast<double>(m.entity_types_.size());
    for (const auto& tq : m.query_types_) {
        const auto& row_counts = counts[tq];
        double total = 0.0;
        for (const auto& [te, c] : row_counts) {
            (void)te;
            total += c;
        }
        const double denom = total + alpha * n_types;
        std::vector<double> row;
        row.reserve(m.entity_types_.size());
        for (const auto& te : m.entity_types_) {
            const auto it = row_counts.find(te);
            const double c = it == row_counts.end() ? 0.0 : it->second;
            row.push_back((c + alpha) / denom);
        }
        m.rows_.push_back(std::move(row));
        m.row_denoms_.push_back(denom);
    }
    return m;
}

double AffinityModel::probability(const std::string& entity_type,
                                  const std::string& query_type) const {
    const auto qit = std::lower_bound(query_types_.begin(), query_types_.end(), query_type);
    if (qit == query_types_.end() || *qit != query_type)
        return entity_types_.empty() ? 0.0 : 1.0 / static_cast<double>(entity_types_.size());
    const auto iq = static_cast<size_t>(qit - query_types_.begin());
    const auto eit = std::lower_bound(entity_types_.begin(), entity_types_.end(), entity_type);
    if (eit == entity_types_.end() || *eit != entity_type)
        return alpha_ / row_denoms_[iq];  // unseen entity type, smoothed mass only
    return rows_[iq][static_cast<size_t>(eit - entity_types_.begin())];
}

double AffinityModel::gamma(const std::string& entity_type, const std::string& query_type) const {
    const bool known_query = std::binary_search(query_types_.begin(), query_types_.end(), query_type);
    if (!known_query)
        return entity_types_.empty() ? 0.0 : 1.0 / static_cast<double>(entity_types_.size());

    const double p = probability(entity_type, query_type);
    if (query_types_.size() == 1) return p;  // empty denominator sum

    double denom = 0.0;
    for (const auto& tq : query_types_)
        if (tq != query_type) denom += 1.0 - probability(entity_type, tq);
    return p / std::max(kEps, denom);
}

double AffinityModel::entity_gamma(const store::EntityProfile& entity,
                                   const std::string& query_type) const {
    if (entity.types.empty()) return gamma(store::kUntypedType, query_type);
    double best = 0.0;
    for (const auto& t : entity.types) best = std::max(best, gamma(t, query_type));
    return best;
}

void AffinityModel::save(const std::filesystem::path& file) const {
    json j;
    j["alpha"] = alpha_;
    j["query_types"] = query_types_;
    j["entity_types"] = entity_types_;
    j["rows"] = rows_;
    j["row_denoms"] = row_denoms_;
    write_file(file, j.dump(2) + "\n");
}

AffinityModel AffinityModel::load(const std::filesystem::path& file) {
    require_artifact(file, "train-affinity");
    const json j = json::parse(read_file(file));
    AffinityModel m;
    m.alpha_ = j.at("alpha").get<double>();
    m.query_types_ = j.at("query_types").get<std::vector<std::string>>();
    m.entity_types_ = j.at("entity_types").get<std::vector<std::string>>();
    m.rows_ = j.at("rows").get<std::vector<std::vector<double>>>();
    m.row_denoms_ = j.at("row_denoms").get<std::vector<double>>();
    return m;
}

AffinityModel AffinityModel::from_parts(double alpha, std::vector<std::string> query_types,
                                        std::vector<std::string> entity_types,
                                        std::vector<std::vector<double>> rows,
                                        std::vector<double> row_denoms) {
    AffinityModel m;
    m.alpha_ = alpha;
    m.query_types_ = std::move(query_types);
    m.entity_types_ = std::move(entity_types);
    m.rows_ = std::move(rows);
    m.row_denoms_ = std::move(row_denoms);
    return m;
}

std::vector<TrainingJudgment> load_training_judgments(const std::filesystem::path& file,
                                                      const store::EntityStore& store,
                                                      int min_grade) {
    require_artifact(file, "synth or an external judgment file");
    std::vector<TrainingJudgment> out;
    LineReader r(file);
    std::string line;
    size_t line_no = 0;
    while (r.next(line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_tabs(line);
        if (f.size() < 4)
            throw InputParseError(file.string() + ":" + std::to_string(line_no) +
                                  ": expected qid<TAB>query_type<TAB>uri<TAB>grade");
        if (std::stoi(f[3]) < min_grade) continue;
        TrainingJudgment j;
        j.query_id = f[0];
        j.query_type = f[1];
        if (auto p = store.find(f[2]))
            j.entity_types = p->types;
        else
            j.entity_types = {store::kUntypedType};
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace entrex::affinity
