#include "threadrank/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <atomic>
#include <future>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "threadrank/error.hpp"

namespace threadrank {

namespace {

std::size_t k_order(KLimit k) {
    return k.bounded() ? k.value() : std::numeric_limits<std::size_t>::max();
}

std::vector<Query> sorted_queries(std::vector<Query> const& queries) {
    auto sorted = queries;
    std::sort(sorted.begin(), sorted.end(), [](Query const& a, Query const& b) { return a.query_id < b.query_id; });
    return sorted;
}

std::vector<std::string> ids_of(std::vector<Query> const& queries) {
    std::vector<std::string> ids;
    ids.reserve(queries.size());
    for (auto const& q : queries) ids.push_back(q.query_id);
    return ids;
}

// First `limit` entries of a pool ranked with a larger limit. Ranks are unchanged
// because the pool ordering is total.
RankedPool truncate_pool(RankedPool const& pool, std::size_t limit) {
    RankedPool out;
    out.query_id = pool.query_id;
    out.pool_size_limit = limit;
    out.skipped_terms = pool.skipped_terms;
    auto n = std::min(limit, pool.entries.size());
    out.entries.assign(pool.entries.begin(), pool.entries.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

unsigned worker_count(unsigned requested, std::size_t tasks) {
    unsigned n = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Runs task(i) for i in [0, count) on up to `workers` threads; each task writes its own slot.
template <typename Task>
void parallel_for(std::size_t count, unsigned workers, Task task) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> running;
    for (unsigned w = 0; w < workers; ++w) {
        running.push_back(std::async(std::launch::async, [&] {
            for (auto i = next++; i < count; i = next++) task(i);
        }));
    }
    for (auto& f : running) f.get();
}

}  // namespace

bool prefer(GridPoint const& a, GridPoint const& b) {
    if (a.mu != b.mu) return a.mu < b.mu;
    if (a.pool_size != b.pool_size) return a.pool_size < b.pool_size;
    return k_order(a.k) < k_order(b.k);
}

std::string to_string(GridPoint const& point) {
    char mu[64];
    std::snprintf(mu, sizeof(mu), "%g", point.mu);
    return std::string("mu=") + mu + " pool=" + std::to_string(point.pool_size) + " k=" + point.k.to_string();
}

std::vector<GridPoint> GridSpec::points() const {
    if (mus.empty() || pool_sizes.empty() || ks.empty()) {
        throw std::invalid_argument("grid axes must be non-empty");
    }
    std::vector<GridPoint> out;
    out.reserve(mus.size() * pool_sizes.size() * ks.size());
    for (auto mu : mus) {
        for (auto pool : pool_sizes) {
            for (auto k : ks) {
                out.push_back(GridPoint{mu, pool, k});
            }
        }
    }
    return out;
}

double GridTable::mean_ap(std::size_t point, std::span<std::size_t const> queries) const {
    if (queries.empty()) return 0.0;
    double sum = 0.0;
    for (auto q : queries) sum += metrics[point][q].ap;
    return sum / static_cast<double>(queries.size());
}

std::size_t GridTable::best_point(std::span<std::size_t const> queries) const {
    if (points.empty()) {
        throw std::invalid_argument("empty grid");
    }
    std::size_t best = 0;
    double best_map = mean_ap(0, queries);
    for (std::size_t p = 1; p < points.size(); ++p) {
        double map = mean_ap(p, queries);
        if (map > best_map || (map == best_map && prefer(points[p], points[best]))) {
            best = p;
            best_map = map;
        }
    }
    return best;
}

MetricReport GridTable::report(std::size_t point, std::span<std::size_t const> queries) const {
    std::vector<std::string> ids;
    std::vector<QueryMetrics> values;
    for (auto q : queries) {
        ids.push_back(query_ids[q]);
        values.push_back(metrics[point][q]);
    }
    return make_report(std::move(ids), std::move(values));
}

GridTable evaluate_grid(std::vector<Query> const& queries, Qrels const& qrels, Index const& index,
                        GridSpec const& spec) {
    auto sorted = sorted_queries(queries);
    GridTable table;
    table.query_ids = ids_of(sorted);
    table.points = spec.points();
    table.metrics.assign(table.points.size(), std::vector<QueryMetrics>(sorted.size()));

    auto const max_pool = *std::max_element(spec.pool_sizes.begin(), spec.pool_sizes.end());
    auto const per_mu = spec.pool_sizes.size() * spec.ks.size();
    auto const tasks = spec.mus.size() * sorted.size();

    parallel_for(tasks, worker_count(spec.workers, tasks), [&](std::size_t task) {
        auto m = task / sorted.size();
        auto q = task % sorted.size();
        auto const& judgments = qrels.judgments(sorted[q].query_id);
        auto full = rank_messages(sorted[q], index, SmoothingParams{spec.mus[m]}, max_pool);
        for (std::size_t p = 0; p < spec.pool_sizes.size(); ++p) {
            auto pool = normalize_pool(truncate_pool(full, spec.pool_sizes[p]));
            for (std::size_t k = 0; k < spec.ks.size(); ++k) {
                auto ranking = aggregate(spec.method, group_by_thread(pool, spec.ks[k]), pool);
                table.metrics[m * per_mu + p * spec.ks.size() + k][q] = evaluate_query(ranking.threads, judgments);
            }
        }
    });
    return table;
}

GridTable evaluate_vd_grid(std::vector<Query> const& queries, Qrels const& qrels, VirtualDocIndex const& index,
                           std::vector<double> const& mus, std::size_t limit) {
    if (mus.empty()) {
        throw std::invalid_argument("grid axes must be non-empty");
    }
    auto sorted = sorted_queries(queries);
    GridTable table;
    table.query_ids = ids_of(sorted);
    for (auto mu : mus) {
        table.points.push_back(GridPoint{mu, limit, KLimit::unlimited()});
    }
    table.metrics.assign(table.points.size(), std::vector<QueryMetrics>(sorted.size()));
    auto tasks = mus.size() * sorted.size();
    parallel_for(tasks, worker_count(0, tasks), [&](std::size_t task) {
        auto m = task / sorted.size();
        auto q = task % sorted.size();
        auto ranking = rank_virtual_docs(sorted[q], index, SmoothingParams{mus[m]}, limit);
        table.metrics[m][q] = evaluate_query(ranking.threads, qrels.judgments(sorted[q].query_id));
    });
    return table;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t query_count, std::size_t folds,
                                                 std::optional<std::uint64_t> shuffle_seed) {
    if (folds < 2) {
        throw std::invalid_argument("cross-validation needs at least two folds");
    }
    if (query_count < folds) {
        throw DataError("cannot split " + std::to_string(query_count) + " queries into " + std::to_string(folds)
                        + " folds");
    }
    std::vector<std::size_t> order(query_count);
    std::iota(order.begin(), order.end(), 0);
    if (shuffle_seed) {
        std::mt19937_64 rng(*shuffle_seed);
        // Fisher-Yates with an explicit draw keeps the permutation identical across standard libraries.
        for (std::size_t i = order.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(rng() % i);
            std::swap(order[i - 1], order[j]);
        }
    }
    std::vector<std::vector<std::size_t>> out(folds);
    auto base = query_count / folds;
    auto extra = query_count % folds;
    std::size_t next = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        auto size = base + (f < extra ? 1 : 0);
        out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(next),
                      order.begin() + static_cast<std::ptrdiff_t>(next + size));
        std::sort(out[f].begin(), out[f].end());
        next += size;
    }
    return out;
}

CrossValidationReport cross_validate(GridTable const& table, std::size_t folds,
                                     std::optional<std::uint64_t> shuffle_seed) {
    auto const n = table.query_ids.size();
    auto test_sets = make_folds(n, folds, shuffle_seed);

    CrossValidationReport report;
    std::vector<QueryMetrics> combined(n);
    for (std::size_t f = 0; f < test_sets.size(); ++f) {
        auto const& test = test_sets[f];
        std::vector<bool> held_out(n, false);
        for (auto q : test) held_out[q] = true;
        std::vector<std::size_t> train;
        for (std::size_t q = 0; q < n; ++q) {
            if (!held_out[q]) train.push_back(q);
        }
        for (auto q : train) {
            if (std::binary_search(test.begin(), test.end(), q)) {
                throw std::logic_error("query " + table.query_ids[q] + " is in both training and test folds");
            }
        }

        auto best = table.best_point(train);
        FoldResult fold;
        fold.fold = f;
        for (auto q : train) fold.train_queries.push_back(table.query_ids[q]);
        for (auto q : test) fold.test_queries.push_back(table.query_ids[q]);
        fold.best = table.points[best];
        fold.train_map = table.mean_ap(best, train);
        fold.test = table.report(best, test);
        for (auto q : test) combined[q] = table.metrics[best][q];
        report.folds.push_back(std::move(fold));
    }
    report.combined = make_report(table.query_ids, std::move(combined));
    return report;
}

CrossValidationReport kfold_grid_search(std::vector<Query> const& queries, Qrels const& qrels, Index const& index,
                                        GridSpec const& spec) {
    if (queries.size() < spec.folds) {
        throw DataError("cannot split " + std::to_string(queries.size()) + " queries into "
                        + std::to_string(spec.folds) + " folds");
    }
    return cross_validate(evaluate_grid(queries, qrels, index, spec), spec.folds, spec.shuffle_seed);
}

FullSetReport select_on_full_set(GridTable const& table) {
    std::vector<std::size_t> all(table.query_ids.size());
    std::iota(all.begin(), all.end(), 0);
    auto best = table.best_point(all);
    return FullSetReport{table.points[best], table.report(best, all)};
}

namespace {

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

char const* k_text(KLimit k, std::string& storage) {
    storage = k.to_string();
    return storage.c_str();
}

}  // namespace

void write_cv_report(std::ostream& out, CrossValidationReport const& report) {
    out << "fold\tmu\tpool\tk\ttrain_map\ttest_map\ttest_p10\ttest_ndcg10\ttest_queries\n";
    std::string k;
    for (auto const& fold : report.folds) {
        char mu[64];
        std::snprintf(mu, sizeof(mu), "%g", fold.best.mu);
        out << fold.fold << '\t' << mu << '\t' << fold.best.pool_size << '\t' << k_text(fold.best.k, k) << '\t'
            << fixed(fold.train_map) << '\t' << fixed(fold.test.mean.ap) << '\t' << fixed(fold.test.mean.precision)
            << '\t' << fixed(fold.test.mean.ndcg) << '\t';
        for (std::size_t i = 0; i < fold.test_queries.size(); ++i) {
            out << (i ? "," : "") << fold.test_queries[i];
        }
        out << '\n';
    }
    out << "cv\t-\t-\t-\t-\t" << fixed(report.combined.mean.ap) << '\t' << fixed(report.combined.mean.precision)
        << '\t' << fixed(report.combined.mean.ndcg) << '\t' << report.combined.query_ids.size() << '\n';
}

void write_full_report(std::ostream& out, FullSetReport const& report) {
    char mu[64];
    std::snprintf(mu, sizeof(mu), "%g", report.best.mu);
    out << "mu\tpool\tk\tmap\tp10\tndcg10\n";
    out << mu << '\t' << report.best.pool_size << '\t' << report.best.k.to_string() << '\t'
        << fixed(report.report.mean.ap) << '\t' << fixed(report.report.mean.precision) << '\t'
        << fixed(report.report.mean.ndcg) << '\n';
}

std::vector<SweepRow> sweep_k(std::vector<Query> const& queries, Qrels const& qrels, Index const& index,
                              AggregationMethod method, SmoothingParams params, std::size_t pool_size,
                              std::size_t k_min, std::size_t k_max) {
    if (k_min == 0 || k_min > k_max) {
        throw std::invalid_argument("k range must satisfy 1 <= k_min <= k_max");
    }
    GridSpec spec;
    spec.mus = {params.mu};
    spec.pool_sizes = {pool_size};
    spec.ks.clear();
    for (auto k = k_min; k <= k_max; ++k) spec.ks.push_back(KLimit::top(k));
    spec.ks.push_back(KLimit::unlimited());
    spec.method = method;

    auto table = evaluate_grid(queries, qrels, index, spec);
    std::vector<std::size_t> all(table.query_ids.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < table.points.size(); ++p) {
        rows.push_back(SweepRow{table.points[p].k, table.report(p, all).mean});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::vector<SweepRow> const& rows) {
    out << "k,map,p10,ndcg10\n";
    for (auto const& row : rows) {
        out << (row.k.bounded() ? std::to_string(row.k.value()) : std::string("basic")) << ',' << fixed(row.mean.ap)
            << ',' << fixed(row.mean.precision) << ',' << fixed(row.mean.ndcg) << '\n';
    }
}

}  // namespace threadrank
