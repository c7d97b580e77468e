#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "threadrank/corpus.hpp"
#include "threadrank/fusion.hpp"
#include "threadrank/index.hpp"
#include "threadrank/metrics.hpp"

namespace threadrank {

struct GridPoint {
    double mu = 0.0;
    std::size_t pool_size = 0;
    KLimit k = KLimit::unlimited();

    friend bool operator==(GridPoint const&, GridPoint const&) = default;
};

/// Preference order used to break MAP ties: smaller mu, then smaller pool, then smaller k
/// (unlimited counts as the largest k).
[[nodiscard]] bool prefer(GridPoint const& a, GridPoint const& b);

[[nodiscard]] std::string to_string(GridPoint const& point);

/// Parameter axes for the exhaustive search. Defaults: mu 500..4000 step 500,
/// pool 500..5000 step 500, k 2..6, five folds.
struct GridSpec {
    std::vector<double> mus = {500, 1000, 1500, 2000, 2500, 3000, 3500, 4000};
    std::vector<std::size_t> pool_sizes = {500, 1000, 1500, 2000, 2500, 3000, 3500, 4000, 4500, 5000};
    std::vector<KLimit> ks = {KLimit::top(2), KLimit::top(3), KLimit::top(4), KLimit::top(5), KLimit::top(6)};
    AggregationMethod method = AggregationMethod::CombSUM;
    std::size_t folds = 5;
    std::optional<std::uint64_t> shuffle_seed;  ///< contiguous folds over sorted ids when unset
    unsigned workers = 0;                       ///< 0 = hardware concurrency

    /// mu-major, then pool size, then k. Throws std::invalid_argument on an empty axis.
    [[nodiscard]] std::vector<GridPoint> points() const;
};

/// Per-query metrics of every grid point over a fixed query set (sorted by id).
struct GridTable {
    std::vector<std::string> query_ids;
    std::vector<GridPoint> points;
    std::vector<std::vector<QueryMetrics>> metrics;  ///< [point][query]

    [[nodiscard]] double mean_ap(std::size_t point, std::span<std::size_t const> queries) const;
    /// MAP-maximizing point over the given queries, ties broken by `prefer`.
    [[nodiscard]] std::size_t best_point(std::span<std::size_t const> queries) const;
    [[nodiscard]] MetricReport report(std::size_t point, std::span<std::size_t const> queries) const;
};

/// Evaluates every point of the grid for every query with the fused message model.
[[nodiscard]] GridTable evaluate_grid(std::vector<Query> const& queries, Qrels const& qrels, Index const& index,
                                      GridSpec const& spec);

/// Same table for the virtual-document baseline; only mu varies, k is unlimited.
[[nodiscard]] GridTable evaluate_vd_grid(std::vector<Query> const& queries, Qrels const& qrels,
                                         VirtualDocIndex const& index, std::vector<double> const& mus,
                                         std::size_t limit);

/// Test-query indices per fold. Ids are sorted (or shuffled with the seed) and cut into
/// contiguous blocks whose sizes differ by at most one. Throws DataError when there are
/// fewer queries than folds.
[[nodiscard]] std::vector<std::vector<std::size_t>> make_folds(std::size_t query_count, std::size_t folds,
                                                               std::optional<std::uint64_t> shuffle_seed = {});

struct FoldResult {
    std::size_t fold = 0;
    std::vector<std::string> train_queries;
    std::vector<std::string> test_queries;
    GridPoint best;
    double train_map = 0.0;
    MetricReport test;
};

struct CrossValidationReport {
    std::vector<FoldResult> folds;
    MetricReport combined;  ///< every query scored by the parameters of the fold that held it out
};

[[nodiscard]] CrossValidationReport cross_validate(GridTable const& table, std::size_t folds,
                                                  std::optional<std::uint64_t> shuffle_seed = {});

[[nodiscard]] CrossValidationReport kfold_grid_search(std::vector<Query> const& queries, Qrels const& qrels,
                                                      Index const& index, GridSpec const& spec);

struct FullSetReport {
    GridPoint best;
    MetricReport report;
};

/// Tunes on all queries and reports the same queries (optimistic, for comparison only).
[[nodiscard]] FullSetReport select_on_full_set(GridTable const& table);

void write_cv_report(std::ostream& out, CrossValidationReport const& report);
void write_full_report(std::ostream& out, FullSetReport const& report);

struct SweepRow {
    KLimit k = KLimit::unlimited();
    QueryMetrics mean;
};

/// One row per k in [k_min, k_max] followed by the basic-mode (unlimited) row.
[[nodiscard]] std::vector<SweepRow> sweep_k(std::vector<Query> const& queries, Qrels const& qrels,
                                            Index const& index, AggregationMethod method, SmoothingParams params,
                                            std::size_t pool_size, std::size_t k_min, std::size_t k_max);

/// CSV with header `k,map,p10,ndcg10`; the basic row uses k = "basic".
void write_sweep_csv(std::ostream& out, std::vector<SweepRow> const& rows);

}  // namespace threadrank
