#include "entrex/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrex/core/io.hpp"

namespace entrex::eval {

namespace {

size_t relevant_in_top_k(const std::vector<std::string>& ranked,
                         const std::map<std::string, int>& qrels_q, int k, int threshold) {
    size_t hits = 0;
    const size_t lim = std::min(ranked.size(), static_cast<size_t>(k));
    for (size_t i = 0; i < lim; ++i) {
        const auto it = qrels_q.find(ranked[i]);
        if (it != qrels_q.end() && it->second >= threshold) ++hits;
    }
    return hits;
}

size_t total_relevant(const std::map<std::string, int>& qrels_q, int threshold) {
    size_t n = 0;
    for (const auto& [uri, grade] : qrels_q) {
        (void)uri;
        if (grade >= threshold) ++n;
    }
    return n;
}

}  // namespace

Qrels load_qrels(const std::filesystem::path& file) {
    require_artifact(file, "synth or an external qrels file");
    Qrels q;
    LineReader r(file);
    std::string line;
    size_t line_no = 0;
    while (r.next(line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string qid, zero, uri;
        int grade = 0;
        if (!(ss >> qid >> zero >> uri >> grade))
            throw InputParseError(file.string() + ":" + std::to_string(line_no) +
                                  ": expected `qid 0 uri grade`");
        q[qid][uri] = grade;
    }
    return q;
}

Run load_run(const std::filesystem::path& file) {
    require_artifact(file, "batch");
    std::map<std::string, std::vector<std::pair<int, std::string>>> tmp;
    LineReader r(file);
    std::string line;
    size_t line_no = 0;
    while (r.next(line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string qid, q0, uri, tag;
        int rank = 0;
        double score = 0.0;
        if (!(ss >> qid >> q0 >> uri >> rank >> score >> tag))
            throw InputParseError(file.string() + ":" + std::to_string(line_no) +
                                  ": expected TREC run line");
        tmp[qid].emplace_back(rank, uri);
    }
    Run run;
    for (auto& [qid, entries] : tmp) {
        std::sort(entries.begin(), entries.end());
        auto& uris = run[qid];
        uris.reserve(entries.size());
        for (auto& [rank, uri] : entries) {
            (void)rank;
            uris.push_back(std::move(uri));
        }
    }
    return run;
}

double p_at_k(const std::vector<std::string>& ranked, const std::map<std::string, int>& qrels_q,
              int k, int rel_threshold) {
    if (k < 1) throw ConfigError("p_at_k requires k >= 1");
    return static_cast<double>(relevant_in_top_k(ranked, qrels_q, k, rel_threshold)) /
           static_cast<double>(k);
}

std::optional<double> r_at_k(const std::vector<std::string>& ranked,
                             const std::map<std::string, int>& qrels_q, int k, int rel_threshold) {
    const size_t rel = total_relevant(qrels_q, rel_threshold);
    if (rel == 0) return std::nullopt;
    return static_cast<double>(relevant_in_top_k(ranked, qrels_q, k, rel_threshold)) /
           static_cast<double>(rel);
}

std::optional<double> avg_r(const std::vector<std::string>& ranked,
                            const std::map<std::string, int>& qrels_q, int rel_threshold) {
    const size_t rel = total_relevant(qrels_q, rel_threshold);
    if (rel == 0) return std::nullopt;
    double sum = 0.0;
    for (int k = 1; k <= 10; ++k)
        sum += static_cast<double>(relevant_in_top_k(ranked, qrels_q, k, rel_threshold)) /
               static_cast<double>(rel);
    return sum / 10.0;
}

std::optional<double> average_precision(const std::vector<std::string>& ranked,
                                        const std::map<std::string, int>& qrels_q,
                                        int rel_threshold) {
    const size_t rel = total_relevant(qrels_q, rel_threshold);
    if (rel == 0) return std::nullopt;
    double sum = 0.0;
    size_t hits = 0;
    for (size_t i = 0; i < ranked.size(); ++i) {
        const auto it = qrels_q.find(ranked[i]);
        if (it != qrels_q.end() && it->second >= rel_threshold) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(rel);
}

double ndcg_at_k(const std::vector<std::string>& ranked,
                 const std::map<std::string, int>& qrels_q, int k) {
    auto gain_at = [&](size_t i) -> double {
        const auto it = qrels_q.find(ranked[i]);
        if (it == qrels_q.end()) return 0.0;
        return static_cast<double>(std::max(it->second - 1, 0));
    };
    double dcg = 0.0;
    const size_t lim = std::min(ranked.size(), static_cast<size_t>(k));
    for (size_t i = 0; i < lim; ++i)
        dcg += i == 0 ? gain_at(i) : gain_at(i) / std::log2(static_cast<double>(i + 1));

    std::vector<int> grades;
    grades.reserve(qrels_q.size());
    for (const auto& [uri, grade] : qrels_q) {
        (void)uri;
        grades.push_back(grade);
    }
    std::sort(grades.rbegin(), grades.rend());
    double idcg = 0.0;
    for (size_t i = 0; i < std::min(grades.size(), static_cast<size_t>(k)); ++i) {
        const double g = static_cast<double>(std::max(grades[i] - 1, 0));
        idcg += i == 0 ? g : g / std::log2(static_cast<double>(i + 1));
    }
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // Continued fraction (Lentz), numerically standard form.
    auto betacf = [](double aa, double bb, double xx) {
        constexpr int kMaxIter = 300;
        constexpr double kEps = 3e-16;
        constexpr double kFpMin = 1e-300;
        const double qab = aa + bb;
        const double qap = aa + 1.0;
        const double qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::abs(d) < kFpMin) d = kFpMin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= kMaxIter; ++m) {
            const int m2 = 2 * m;
            double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + num * d;
            if (std::abs(d) < kFpMin) d = kFpMin;
            c = 1.0 + num / c;
            if (std::abs(c) < kFpMin) c = kFpMin;
            d = 1.0 / d;
            h *= d * c;
            num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + num * d;
            if (std::abs(d) < kFpMin) d = kFpMin;
            c = 1.0 + num / c;
            if (std::abs(c) < kFpMin) c = kFpMin;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < kEps) break;
        }
        return h;
    };
    const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - ln_beta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double dof) {
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ConfigError("paired_t_test requires equal-length arrays, n >= 2");
    const size_t n = a.size();
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);

    TTestResult res;
    if (var <= 0.0) {
        res.zero_variance = true;
        res.t = 0.0;
        res.p = mean == 0.0 ? 1.0 : 0.0;
        return res;
    }
    res.t = mean / std::sqrt(var / static_cast<double>(n));
    res.p = student_t_two_tailed_p(res.t, static_cast<double>(n - 1));
    return res;
}

std::array<uint64_t, 4> relevance_histogram(const Run& run, const Qrels& qrels, int k) {
    std::array<uint64_t, 4> counts = {0, 0, 0, 0};  // grades 2..5
    for (const auto& [qid, ranked] : run) {
        const auto qit = qrels.find(qid);
        if (qit == qrels.end()) continue;
        const size_t lim = std::min(ranked.size(), static_cast<size_t>(k));
        for (size_t i = 0; i < lim; ++i) {
            const auto it = qit->second.find(ranked[i]);
            if (it == qit->second.end()) continue;
            if (it->second >= 2 && it->second <= 5) ++counts[static_cast<size_t>(it->second - 2)];
        }
    }
    return counts;
}

MetricReport evaluate_run(const Run& run, const Qrels& qrels, int rel_threshold) {
    MetricReport report;
    static const std::map<std::string, int> kNoJudgments;
    for (const auto& [qid, ranked] : run) {
        const auto qit = qrels.find(qid);
        const auto& qrels_q = qit == qrels.end() ? kNoJudgments : qit->second;

        QueryMetrics m;
        for (int k = 1; k <= 10; ++k) {
            m.p[static_cast<size_t>(k - 1)] = p_at_k(ranked, qrels_q, k, rel_threshold);
            m.ndcg[static_cast<size_t>(k - 1)] = ndcg_at_k(ranked, qrels_q, k);
        }
        const auto r10 = r_at_k(ranked, qrels_q, 10, rel_threshold);
        m.has_relevant = r10.has_value();
        if (m.has_relevant) {
            for (int k = 1; k <= 10; ++k)
                m.r[static_cast<size_t>(k - 1)] = *r_at_k(ranked, qrels_q, k, rel_threshold);
            m.ap = *average_precision(ranked, qrels_q, rel_threshold);
            m.avg_r = *avg_r(ranked, qrels_q, rel_threshold);
        }
        report.per_query.emplace(qid, m);
    }

    report.queries_total = report.per_query.size();
    for (const auto& [qid, m] : report.per_query) {
        (void)qid;
        for (size_t k = 0; k < 10; ++k) {
            report.mean_p[k] += m.p[k];
            report.mean_ndcg[k] += m.ndcg[k];
        }
        if (m.has_relevant) {
            ++report.queries_with_relevant;
            for (size_t k = 0; k < 10; ++k) report.mean_r[k] += m.r[k];
            report.map += m.ap;
            report.mean_avg_r += m.avg_r;
        }
    }
    if (report.queries_total > 0)
        for (size_t k = 0; k < 10; ++k) {
            report.mean_p[k] /= static_cast<double>(report.queries_total);
            report.mean_ndcg[k] /= static_cast<double>(report.queries_total);
        }
    if (report.queries_with_relevant > 0) {
        for (size_t k = 0; k < 10; ++k)
            report.mean_r[k] /= static_cast<double>(report.queries_with_relevant);
        report.map /= static_cast<double>(report.queries_with_relevant);
        report.mean_avg_r /= static_cast<double>(report.queries_with_relevant);
    }
    return report;
}

std::vector<double> MetricReport::per_query_metric(const std::string& name) const {
    std::vector<double> out;
    for (const auto& [qid, m] : per_query) {
        (void)qid;
        if (name == "P@10") {
            out.push_back(m.p[9]);
        } else if (name == "NDCG@10") {
            out.push_back(m.ndcg[9]);
        } else if (m.has_relevant) {
            if (name == "R@10")
                out.push_back(m.r[9]);
            else if (name == "AP")
                out.push_back(m.ap);
            else if (name == "AvgR")
                out.push_back(m.avg_r);
            else
                throw ConfigError("unknown metric: " + name);
        }
    }
    return out;
}

std::vector<std::string> MetricReport::query_ids_with_relevant() const {
    std::vector<std::string> out;
    for (const auto& [qid, m] : per_query)
        if (m.has_relevant) out.push_back(qid);
    return out;
}

}  // namespace entrex::eval
