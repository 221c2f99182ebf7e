#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace entrex::eval {

// qid -> uri -> grade (1..5)
using Qrels = std::map<std::string, std::map<std::string, int>>;

// qid -> uris in rank order
using Run = std::map<std::string, std::vector<std::string>>;

Qrels load_qrels(const std::filesystem::path& file);
Run load_run(const std::filesystem::path& file);

// Relevance binarization: grade >= threshold (default 3); unjudged counts
// as not relevant.
double p_at_k(const std::vector<std::string>& ranked, const std::map<std::string, int>& qrels_q,
              int k, int rel_threshold = 3);

// nullopt when the query has no relevant entity (excluded from means).
std::optional<double> r_at_k(const std::vector<std::string>& ranked,
                             const std::map<std::string, int>& qrels_q, int k,
                             int rel_threshold = 3);
std::optional<double> avg_r(const std::vector<std::string>& ranked,
                            const std::map<std::string, int>& qrels_q, int rel_threshold = 3);
std::optional<double> average_precision(const std::vector<std::string>& ranked,
                                        const std::map<std::string, int>& qrels_q,
                                        int rel_threshold = 3);

// Gains are grade - 1; the ideal ordering ranks all judged entities by
// grade descending. iDCG of 0 yields 0.
double ndcg_at_k(const std::vector<std::string>& ranked,
                 const std::map<std::string, int>& qrels_q, int k);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    bool zero_variance = false;
};

// Two-tailed paired t-test; p from the Student t CDF via the regularized
// incomplete beta function. Zero-variance differences yield p = 1 for a
// zero mean and the p = 0 sentinel otherwise.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b); exposed for the oracle tests.
double incomplete_beta(double a, double b, double x);
double student_t_two_tailed_p(double t, double dof);

// Counts of retrieved top-k entities per grade 2..5, summed over queries.
std::array<uint64_t, 4> relevance_histogram(const Run& run, const Qrels& qrels, int k = 10);

struct QueryMetrics {
    std::array<double, 10> p;     // P@1..P@10
    std::array<double, 10> r;     // R@1..R@10 (meaningless when !has_relevant)
    std::array<double, 10> ndcg;  // NDCG@1..NDCG@10
    double ap = 0.0;
    double avg_r = 0.0;
    bool has_relevant = false;
};

struct MetricReport {
    std::map<std::string, QueryMetrics> per_query;
    std::array<double, 10> mean_p{};
    std::array<double, 10> mean_r{};
    std::array<double, 10> mean_ndcg{};
    double map = 0.0;
    double mean_avg_r = 0.0;
    size_t queries_total = 0;
    size_t queries_with_relevant = 0;

    // Aligned per-query arrays for significance testing; queries without
    // relevant entities are skipped for recall-based metrics.
    std::vector<double> per_query_metric(const std::string& name) const;
    std::vector<std::string> query_ids_with_relevant() const;
};

MetricReport evaluate_run(const Run& run, const Qrels& qrels, int rel_threshold = 3);

}  // namespace entrex::eval
