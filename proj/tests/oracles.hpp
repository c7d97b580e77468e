#pragma once

// Test-only reference implementations. They share no code path with the library
// beyond the analysis chain: no index, no pool machinery, no fusion code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "threadrank/analysis.hpp"
#include "threadrank/corpus.hpp"
#include "threadrank/fusion.hpp"
#include "threadrank/scoring.hpp"

namespace oracle {

struct ScoredDoc {
    std::string message_id;
    std::string thread_id;
    double log_score;
};

/// Direct evaluation of the Dirichlet query likelihood from raw text.
inline std::vector<ScoredDoc> rank_by_direct_evaluation(std::vector<threadrank::Thread> const& threads,
                                                        std::string const& query_text, double mu) {
    std::map<std::string, double> collection;
    double total = 0.0;
    struct Doc {
        threadrank::Message const* message;
        std::map<std::string, double> tf;
        double length;
    };
    std::vector<Doc> docs;
    for (auto const& thread : threads) {
        for (auto const& message : thread.messages) {
            Doc doc{&message, {}, 0.0};
            for (auto const& token : threadrank::analyze(message.text)) {
                doc.tf[token] += 1.0;
                collection[token] += 1.0;
                doc.length += 1.0;
                total += 1.0;
            }
            docs.push_back(std::move(doc));
        }
    }
    std::map<std::string, double> query_tf;
    for (auto const& term : threadrank::analyze(query_text)) query_tf[term] += 1.0;

    std::vector<ScoredDoc> out;
    for (auto const& doc : docs) {
        bool candidate = false;
        double score = 0.0;
        for (auto const& [term, n_q] : query_tf) {
            auto c = collection.find(term);
            if (c == collection.end()) continue;
            auto f = doc.tf.find(term);
            double tf = f == doc.tf.end() ? 0.0 : f->second;
            candidate = candidate || tf > 0.0;
            score += n_q * std::log((tf + mu * (c->second / total)) / (doc.length + mu));
        }
        if (candidate) out.push_back({doc.message->message_id, doc.message->thread_id, score});
    }
    std::sort(out.begin(), out.end(), [](ScoredDoc const& a, ScoredDoc const& b) {
        return a.log_score != b.log_score ? a.log_score > b.log_score : a.message_id < b.message_id;
    });
    return out;
}

/// Naive fusion over (thread, rank, normalized score) triples.
inline std::vector<threadrank::RankedThread> fuse(std::vector<threadrank::ScoredMessage> const& pool,
                                                  threadrank::AggregationMethod method, std::size_t k /*0 = all*/) {
    using threadrank::AggregationMethod;
    std::map<std::string, std::vector<threadrank::ScoredMessage>> by_thread;
    for (auto const& m : pool) by_thread[m.thread_id].push_back(m);
    double N = static_cast<double>(pool.size());

    std::vector<threadrank::RankedThread> out;
    for (auto& [thread, messages] : by_thread) {
        std::sort(messages.begin(), messages.end(), [](auto const& a, auto const& b) { return a.rank < b.rank; });
        if (k != 0 && messages.size() > k) messages.resize(k);
        double n = static_cast<double>(messages.size());
        std::vector<double> s;
        for (auto const& m : messages) s.push_back(m.normalized_score);

        double value = 0.0;
        switch (method) {
        case AggregationMethod::Votes: value = n; break;
        case AggregationMethod::RR:
            for (auto const& m : messages) value += 1.0 / static_cast<double>(m.rank);
            break;
        case AggregationMethod::BordaFuse:
            for (auto const& m : messages) value += N - static_cast<double>(m.rank);
            break;
        case AggregationMethod::CombMIN: value = *std::min_element(s.begin(), s.end()); break;
        case AggregationMethod::CombMAX: value = *std::max_element(s.begin(), s.end()); break;
        case AggregationMethod::CombMED: {
            auto sorted = s;
            std::sort(sorted.begin(), sorted.end());
            auto h = sorted.size() / 2;
            value = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
            break;
        }
        case AggregationMethod::CombSUM:
            for (auto v : s) value += v;
            break;
        case AggregationMethod::CombANZ:
            for (auto v : s) value += v;
            value /= n;
            break;
        case AggregationMethod::CombGNZ: {
            double product = 1.0;
            for (auto v : s) product *= v;
            value = std::pow(product, 1.0 / n);
            break;
        }
        case AggregationMethod::CombMNZ:
            for (auto v : s) value += v;
            value *= n;
            break;
        case AggregationMethod::ExpCombSUM:
            for (auto v : s) value += std::exp(v);
            break;
        case AggregationMethod::ExpCombANZ:
            for (auto v : s) value += std::exp(v);
            value /= n;
            break;
        case AggregationMethod::ExpCombMNZ:
            for (auto v : s) value += std::exp(v);
            value *= n;
            break;
        }
        out.push_back({thread, value});
    }
    std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
        return a.score != b.score ? a.score > b.score : a.thread_id < b.thread_id;
    });
    return out;
}

/// Random ranked pool with up to `max_entries` messages spread over up to `max_threads` threads.
inline threadrank::RankedPool random_pool(std::mt19937_64& rng, std::size_t max_entries, std::size_t max_threads) {
    std::uniform_int_distribution<std::size_t> entries_dist(1, max_entries);
    std::uniform_int_distribution<std::size_t> threads_dist(1, max_threads);
    std::uniform_real_distribution<double> score_dist(-30.0, -2.0);
    auto entries = entries_dist(rng);
    auto threads = threads_dist(rng);
    std::uniform_int_distribution<std::size_t> pick(0, threads - 1);

    std::vector<threadrank::ScoredMessage> messages;
    for (std::size_t i = 0; i < entries; ++i) {
        threadrank::ScoredMessage m;
        m.doc = static_cast<threadrank::DocRef>(i);
        m.message_id = "m" + std::to_string(1000 + i);
        m.thread_id = "T" + std::to_string(pick(rng));
        m.log_score = score_dist(rng);
        messages.push_back(std::move(m));
    }
    threadrank::RankedPool pool;
    pool.query_id = "q";
    pool.pool_size_limit = entries;
    threadrank::finalize_pool(messages, entries);
    pool.entries = std::move(messages);
    return threadrank::normalize_pool(std::move(pool));
}

inline std::vector<std::string> order(std::vector<threadrank::RankedThread> const& ranking) {
    std::vector<std::string> ids;
    for (auto const& t : ranking) ids.push_back(t.thread_id);
    return ids;
}

}  // namespace oracle
