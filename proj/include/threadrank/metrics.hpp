#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "threadrank/corpus.hpp"
#include "threadrank/ranking.hpp"
#include "threadrank/run_file.hpp"

namespace threadrank {

/// Grades 1 and 2 are relevant.
[[nodiscard]] constexpr int binarize(int grade) noexcept { return grade >= 1 ? 1 : 0; }

using Judgments = std::map<std::string, int>;

/// Relevant threads among the first `cutoff` entries, divided by `cutoff`.
[[nodiscard]] double precision_at(std::vector<RankedThread> const& ranking, Judgments const& judgments,
                                  std::size_t cutoff = 10);

/// Sum of precision at each relevant retrieved thread, over the number of relevant
/// threads in the judgments. 0 when nothing is relevant.
[[nodiscard]] double average_precision(std::vector<RankedThread> const& ranking, Judgments const& judgments);

/// Binary-gain NDCG with log2(i + 1) discounts; 0 when the ideal DCG is 0.
[[nodiscard]] double ndcg_at(std::vector<RankedThread> const& ranking, Judgments const& judgments,
                             std::size_t cutoff = 10);

struct QueryMetrics {
    double ap = 0.0;
    double precision = 0.0;
    double ndcg = 0.0;

    friend bool operator==(QueryMetrics const&, QueryMetrics const&) = default;
};

enum class Metric { MAP, Precision, NDCG };

[[nodiscard]] double metric_value(QueryMetrics const& metrics, Metric metric);
/// "map", "p<cutoff>" or "ndcg<cutoff>".
[[nodiscard]] std::string metric_name(Metric metric, std::size_t cutoff = 10);
/// Parses "map", "p10" and "ndcg10" style names (cutoff must match).
[[nodiscard]] Metric parse_metric(std::string const& name, std::size_t cutoff = 10);

struct MetricReport {
    std::size_t cutoff = 10;
    std::vector<std::string> query_ids;
    std::vector<QueryMetrics> per_query;
    QueryMetrics mean;  ///< MAP, mean P@cutoff, mean NDCG@cutoff

    [[nodiscard]] std::vector<double> values(Metric metric) const;
};

[[nodiscard]] QueryMetrics evaluate_query(std::vector<RankedThread> const& ranking, Judgments const& judgments,
                                          std::size_t cutoff = 10);

/// Builds a report (and its means) from per-query values.
[[nodiscard]] MetricReport make_report(std::vector<std::string> query_ids, std::vector<QueryMetrics> per_query,
                                       std::size_t cutoff = 10);

/// Evaluates the listed queries; a query missing from the run scores 0 everywhere.
[[nodiscard]] MetricReport evaluate(Run const& run, Qrels const& qrels, std::vector<std::string> const& query_ids,
                                    std::size_t cutoff = 10);

/// Evaluates the union of the run's and the qrels' query ids.
[[nodiscard]] MetricReport evaluate(Run const& run, Qrels const& qrels, std::size_t cutoff = 10);

/// `query_id<TAB>metric<TAB>value` rows followed by the `all` rows.
void write_report(std::ostream& out, MetricReport const& report);

}  // namespace threadrank
