#include "threadrank/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace threadrank {

namespace {

int relevance(Judgments const& judgments, std::string const& thread_id) {
    auto it = judgments.find(thread_id);
    return it == judgments.end() ? 0 : binarize(it->second);
}

std::size_t relevant_count(Judgments const& judgments) {
    std::size_t n = 0;
    for (auto const& [_, grade] : judgments) {
        n += static_cast<std::size_t>(binarize(grade));
    }
    return n;
}

}  // namespace

double precision_at(std::vector<RankedThread> const& ranking, Judgments const& judgments, std::size_t cutoff) {
    if (cutoff == 0) {
        throw std::invalid_argument("cutoff must be at least 1");
    }
    auto depth = std::min(cutoff, ranking.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        hits += static_cast<std::size_t>(relevance(judgments, ranking[i].thread_id));
    }
    return static_cast<double>(hits) / static_cast<double>(cutoff);
}

double average_precision(std::vector<RankedThread> const& ranking, Judgments const& judgments) {
    auto total = relevant_count(judgments);
    if (total == 0) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (relevance(judgments, ranking[i].thread_id) != 0) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(total);
}

double ndcg_at(std::vector<RankedThread> const& ranking, Judgments const& judgments, std::size_t cutoff) {
    if (cutoff == 0) {
        throw std::invalid_argument("cutoff must be at least 1");
    }
    double dcg = 0.0;
    auto depth = std::min(cutoff, ranking.size());
    for (std::size_t i = 0; i < depth; ++i) {
        dcg += relevance(judgments, ranking[i].thread_id) / std::log2(static_cast<double>(i) + 2.0);
    }
    double ideal = 0.0;
    auto ideal_depth = std::min(cutoff, relevant_count(judgments));
    for (std::size_t i = 0; i < ideal_depth; ++i) {
        ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return ideal == 0.0 ? 0.0 : dcg / ideal;
}

double metric_value(QueryMetrics const& metrics, Metric metric) {
    switch (metric) {
    case Metric::MAP: return metrics.ap;
    case Metric::Precision: return metrics.precision;
    case Metric::NDCG: return metrics.ndcg;
    }
    return 0.0;
}

std::string metric_name(Metric metric, std::size_t cutoff) {
    switch (metric) {
    case Metric::MAP: return "map";
    case Metric::Precision: return "p" + std::to_string(cutoff);
    case Metric::NDCG: return "ndcg" + std::to_string(cutoff);
    }
    return "?";
}

Metric parse_metric(std::string const& name, std::size_t cutoff) {
    for (auto metric : {Metric::MAP, Metric::Precision, Metric::NDCG}) {
        if (metric_name(metric, cutoff) == name) return metric;
    }
    throw std::invalid_argument("unknown metric '" + name + "'");
}

std::vector<double> MetricReport::values(Metric metric) const {
    std::vector<double> out;
    out.reserve(per_query.size());
    for (auto const& m : per_query) {
        out.push_back(metric_value(m, metric));
    }
    return out;
}

QueryMetrics evaluate_query(std::vector<RankedThread> const& ranking, Judgments const& judgments, std::size_t cutoff) {
    return QueryMetrics{average_precision(ranking, judgments), precision_at(ranking, judgments, cutoff),
                        ndcg_at(ranking, judgments, cutoff)};
}

MetricReport make_report(std::vector<std::string> query_ids, std::vector<QueryMetrics> per_query, std::size_t cutoff) {
    MetricReport report;
    report.cutoff = cutoff;
    report.query_ids = std::move(query_ids);
    report.per_query = std::move(per_query);
    if (!report.per_query.empty()) {
        for (auto const& m : report.per_query) {
            report.mean.ap += m.ap;
            report.mean.precision += m.precision;
            report.mean.ndcg += m.ndcg;
        }
        auto n = static_cast<double>(report.per_query.size());
        report.mean.ap /= n;
        report.mean.precision /= n;
        report.mean.ndcg /= n;
    }
    return report;
}

MetricReport evaluate(Run const& run, Qrels const& qrels, std::vector<std::string> const& query_ids,
                      std::size_t cutoff) {
    static std::vector<RankedThread> const empty;
    std::vector<QueryMetrics> per_query;
    per_query.reserve(query_ids.size());
    for (auto const& id : query_ids) {
        auto it = run.find(id);
        per_query.push_back(evaluate_query(it == run.end() ? empty : it->second, qrels.judgments(id), cutoff));
    }
    return make_report(query_ids, std::move(per_query), cutoff);
}

MetricReport evaluate(Run const& run, Qrels const& qrels, std::size_t cutoff) {
    std::set<std::string> ids;
    for (auto const& [id, _] : run) ids.insert(id);
    for (auto const& id : qrels.query_ids()) ids.insert(id);
    return evaluate(run, qrels, std::vector<std::string>(ids.begin(), ids.end()), cutoff);
}

void write_report(std::ostream& out, MetricReport const& report) {
    char value[64];
    auto row = [&](std::string const& id, Metric metric, double v) {
        std::snprintf(value, sizeof(value), "%.6f", v);
        out << id << '\t' << metric_name(metric, report.cutoff) << '\t' << value << '\n';
    };
    for (std::size_t i = 0; i < report.per_query.size(); ++i) {
        for (auto metric : {Metric::MAP, Metric::Precision, Metric::NDCG}) {
            row(report.query_ids[i], metric, metric_value(report.per_query[i], metric));
        }
    }
    for (auto metric : {Metric::MAP, Metric::Precision, Metric::NDCG}) {
        row("all", metric, metric_value(report.mean, metric));
    }
}

}  // namespace threadrank
