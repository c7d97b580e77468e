#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "threadrank/corpus.hpp"
#include "threadrank/index.hpp"
#include "threadrank/ranking.hpp"

namespace threadrank {

/// Dirichlet prior mu; must be > 0.
struct SmoothingParams {
    double mu = 1000.0;
};

/// A query reduced to distinct terms with their counts n(q, Q), sorted by term.
struct QueryTerms {
    std::vector<std::pair<std::string, std::uint32_t>> counts;
};

[[nodiscard]] QueryTerms count_terms(Query const& query);

struct ScoredMessage {
    DocRef doc = 0;
    std::string message_id;
    std::string thread_id;
    double log_score = 0.0;         ///< ln P(Q|M)
    double normalized_score = 0.0;  ///< exp(log_score - max log_score in pool), set by normalize_pool
    std::size_t rank = 0;           ///< 1-based

    friend bool operator==(ScoredMessage const&, ScoredMessage const&) = default;
};

/// R_Q: the ranked message list for one query, ordered by (log_score desc, message_id asc).
struct RankedPool {
    std::string query_id;
    std::vector<ScoredMessage> entries;
    std::size_t pool_size_limit = 0;
    std::vector<std::string> skipped_terms;  ///< query terms absent from the collection

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries.empty(); }
};

/// Sorts entries by the pool ordering, truncates to `limit` and assigns ranks 1..n.
void finalize_pool(std::vector<ScoredMessage>& entries, std::size_t limit);

/// ln P(Q|M) = sum_q n(q,Q) ln[(n(q,M) + mu P(q|C)) / (|M| + mu)].
/// Terms with P(q|C) = 0 are skipped; an empty query scores 0.
[[nodiscard]] double log_query_likelihood(Query const& query, DocRef doc, Index const& index,
                                          SmoothingParams params);

/// Scores every document containing at least one query term and keeps the top
/// `pool_size_limit`. Throws std::invalid_argument if the limit is 0 or mu <= 0.
[[nodiscard]] RankedPool rank_messages(Query const& query, Index const& index, SmoothingParams params,
                                       std::size_t pool_size_limit);

/// The virtual-document baseline; returns threads ordered by (score desc, thread_id asc).
[[nodiscard]] ThreadRanking rank_virtual_docs(Query const& query, VirtualDocIndex const& index,
                                              SmoothingParams params, std::size_t limit);

/// Sets normalized_score = exp(log_score - max log_score). Ranks are unchanged.
[[nodiscard]] RankedPool normalize_pool(RankedPool pool);

}  // namespace threadrank
