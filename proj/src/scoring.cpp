#include "threadrank/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace threadrank {

QueryTerms count_terms(Query const& query) {
    std::map<std::string, std::uint32_t> counts;
    for (auto const& term : query.terms) {
        ++counts[term];
    }
    return QueryTerms{{counts.begin(), counts.end()}};
}

namespace {

struct ResolvedTerm {
    TermId id;
    double weight;      // n(q, Q)
    double background;  // mu * P(q|C)
};

struct ResolvedQuery {
    std::vector<ResolvedTerm> terms;
    std::vector<std::string> skipped;
};

ResolvedQuery resolve(Query const& query, Index const& index, SmoothingParams params) {
    ResolvedQuery resolved;
    for (auto const& [term, count] : count_terms(query).counts) {
        auto id = index.find(term);
        if (!id) {
            resolved.skipped.push_back(term);
            continue;
        }
        resolved.terms.push_back(ResolvedTerm{*id, static_cast<double>(count), params.mu * collection_prob(index, *id)});
    }
    return resolved;
}

double term_factor(ResolvedTerm const& term, std::uint32_t tf, std::uint32_t doc_length, double mu) {
    return term.weight * std::log((static_cast<double>(tf) + term.background) / (static_cast<double>(doc_length) + mu));
}

void check_params(SmoothingParams params) {
    if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
        throw std::invalid_argument("smoothing parameter mu must be a positive finite number");
    }
}

// Scores all documents that contain at least one resolved term.
std::vector<ScoredMessage> score_candidates(ResolvedQuery const& query, Index const& index, SmoothingParams params) {
    std::vector<DocRef> candidates;
    for (auto const& term : query.terms) {
        for (auto const& posting : index.postings(term.id)) {
            candidates.push_back(posting.doc);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<double> scores(candidates.size(), 0.0);
    for (auto const& term : query.terms) {
        auto postings = index.postings(term.id);
        auto posting = postings.begin();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            while (posting != postings.end() && posting->doc < candidates[c]) {
                ++posting;
            }
            std::uint32_t tf = (posting != postings.end() && posting->doc == candidates[c]) ? posting->tf : 0;
            scores[c] += term_factor(term, tf, index.doc_length(candidates[c]), params.mu);
        }
    }

    std::vector<ScoredMessage> entries;
    entries.reserve(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        auto const& meta = index.doc(candidates[c]);
        entries.push_back(ScoredMessage{candidates[c], meta.message_id, meta.thread_id, scores[c], 0.0, 0});
    }
    return entries;
}

}  // namespace

void finalize_pool(std::vector<ScoredMessage>& entries, std::size_t limit) {
    auto before = [](ScoredMessage const& a, ScoredMessage const& b) {
        if (a.log_score != b.log_score) return a.log_score > b.log_score;
        return a.message_id < b.message_id;
    };
    if (entries.size() > limit) {
        std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(limit), entries.end(), before);
        entries.resize(limit);
    } else {
        std::sort(entries.begin(), entries.end(), before);
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = i + 1;
    }
}

double log_query_likelihood(Query const& query, DocRef doc, Index const& index, SmoothingParams params) {
    check_params(params);
    double score = 0.0;
    for (auto const& term : resolve(query, index, params).terms) {
        score += term_factor(term, index.term_frequency(term.id, doc), index.doc_length(doc), params.mu);
    }
    return score;
}

RankedPool rank_messages(Query const& query, Index const& index, SmoothingParams params, std::size_t pool_size_limit) {
    check_params(params);
    if (pool_size_limit == 0) {
        throw std::invalid_argument("pool size limit must be at least 1");
    }
    auto resolved = resolve(query, index, params);
    RankedPool pool;
    pool.query_id = query.query_id;
    pool.pool_size_limit = pool_size_limit;
    pool.entries = score_candidates(resolved, index, params);
    pool.skipped_terms = std::move(resolved.skipped);
    finalize_pool(pool.entries, pool_size_limit);
    return pool;
}

ThreadRanking rank_virtual_docs(Query const& query, VirtualDocIndex const& index, SmoothingParams params,
                                std::size_t limit) {
    auto pool = rank_messages(query, index.docs(), params, limit);
    ThreadRanking ranking;
    ranking.query_id = query.query_id;
    ranking.threads.reserve(pool.size());
    for (auto const& entry : pool.entries) {
        ranking.threads.push_back(RankedThread{entry.thread_id, entry.log_score});
    }
    return ranking;
}

RankedPool normalize_pool(RankedPool pool) {
    if (pool.entries.empty()) {
        return pool;
    }
    double top = pool.entries.front().log_score;
    for (auto const& entry : pool.entries) {
        top = std::max(top, entry.log_score);
    }
    for (auto& entry : pool.entries) {
        entry.normalized_score = std::exp(entry.log_score - top);
    }
    return pool;
}

}  // namespace threadrank
