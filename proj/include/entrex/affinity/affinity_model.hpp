#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "entrex/store/entity_store.hpp"

namespace entrex::affinity {

// One training judgment: a relevant entity's declared types for a query.
struct TrainingJudgment {
    std::string query_id;
    std::string query_type;
    std::vector<std::string> entity_types;
};

// Conditional distribution p(t_e | t_q) estimated from training judgments
// with additive smoothing. Rows are query types, columns the entity types
// observed in training; each row sums to 1. Types never seen in training
// score alpha / row_denom.
class AffinityModel {
public:
    static AffinityModel train(const std::vector<TrainingJudgment>& judgments, double alpha = 1.0);

    double probability(const std::string& entity_type, const std::string& query_type) const;

    // Type-affinity score: p(t_e|t_q) / max(eps, sum_{t_q' != t_q} (1 - p(t_e|t_q'))).
    // A single-query-type model falls back to p; an unknown query type
    // falls back to the uniform 1/|T_e|.
    double gamma(const std::string& entity_type, const std::string& query_type) const;

    // Max gamma across the entity's declared types.
    double entity_gamma(const store::EntityProfile& entity, const std::string& query_type) const;

    void save(const std::filesystem::path& file) const;
    static AffinityModel load(const std::filesystem::path& file);

    const std::vector<std::string>& query_types() const { return query_types_; }
    const std::vector<std::string>& entity_types() const { return entity_types_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    double alpha() const { return alpha_; }

    // Direct construction, used by tests exercising the score formula.
    static AffinityModel from_parts(double alpha, std::vector<std::string> query_types,
                                    std::vector<std::string> entity_types,
                                    std::vector<std::vector<double>> rows,
                                    std::vector<double> row_denoms);

private:
    double alpha_ = 1.0;
    std::vector<std::string> query_types_;   // sorted
    std::vector<std::string> entity_types_;  // sorted
    std::vector<std::vector<double>> rows_;  // rows_[iq][ie] = p(t_e | t_q)
    std::vector<double> row_denoms_;         // sum of counts + alpha * |T_e| per row
};

// Reads TSV `query_id <TAB> query_type <TAB> entity_uri <TAB> grade`, keeps
// grade >= min_grade, and joins entity types from the store.
std::vector<TrainingJudgment> load_training_judgments(const std::filesystem::path& file,
                                                      const store::EntityStore& store,
                                                      int min_grade = 3);

}  // namespace entrex::affinity
