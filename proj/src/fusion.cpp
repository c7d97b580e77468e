#include "threadrank/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace threadrank {

void sort_ranking(std::vector<RankedThread>& threads) {
    std::sort(threads.begin(), threads.end(), [](RankedThread const& a, RankedThread const& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.thread_id < b.thread_id;
    });
}

std::vector<std::string> thread_order(ThreadRanking const& ranking) {
    std::vector<std::string> ids;
    ids.reserve(ranking.threads.size());
    for (auto const& t : ranking.threads) {
        ids.push_back(t.thread_id);
    }
    return ids;
}

std::string_view method_name(AggregationMethod method) {
    switch (method) {
    case AggregationMethod::Votes: return "votes";
    case AggregationMethod::RR: return "rr";
    case AggregationMethod::BordaFuse: return "bordafuse";
    case AggregationMethod::CombMIN: return "combmin";
    case AggregationMethod::CombMAX: return "combmax";
    case AggregationMethod::CombMED: return "combmed";
    case AggregationMethod::CombSUM: return "combsum";
    case AggregationMethod::CombANZ: return "combanz";
    case AggregationMethod::CombGNZ: return "combgnz";
    case AggregationMethod::CombMNZ: return "combmnz";
    case AggregationMethod::ExpCombSUM: return "expcombsum";
    case AggregationMethod::ExpCombANZ: return "expcombanz";
    case AggregationMethod::ExpCombMNZ: return "expcombmnz";
    }
    return "unknown";
}

std::optional<AggregationMethod> parse_method(std::string_view name) {
    for (auto method : kAllMethods) {
        if (method_name(method) == name) return method;
    }
    return std::nullopt;
}

bool is_rank_based(AggregationMethod method) {
    return method == AggregationMethod::Votes || method == AggregationMethod::RR
           || method == AggregationMethod::BordaFuse;
}

KLimit KLimit::top(std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    return KLimit(k);
}

KLimit KLimit::parse(std::string_view text) {
    if (text == "unlimited" || text == "basic") {
        return unlimited();
    }
    std::size_t k = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc() || end != text.data() + text.size() || k == 0) {
        throw std::invalid_argument("k must be a positive integer or 'unlimited', got '" + std::string(text) + "'");
    }
    return top(k);
}

std::string KLimit::to_string() const {
    return bounded() ? std::to_string(m_k) : std::string("unlimited");
}

std::vector<ThreadGroup> group_by_thread(RankedPool const& pool, KLimit k) {
    std::vector<ThreadGroup> groups;
    std::unordered_map<std::string, std::size_t> slot;
    for (auto const& entry : pool.entries) {
        auto [it, fresh] = slot.emplace(entry.thread_id, groups.size());
        if (fresh) {
            groups.push_back(ThreadGroup{entry.thread_id, {}, {}});
        }
        groups[it->second].members.push_back(entry);
    }
    for (auto& group : groups) {
        auto n = k.apply(group.members.size());
        group.truncated.assign(group.members.begin(), group.members.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return groups;
}

double aggregate_group(AggregationMethod method, ThreadGroup const& group, std::size_t pool_size) {
    auto const& messages = group.truncated;
    auto n = static_cast<double>(messages.size());
    if (messages.empty()) {
        return 0.0;
    }

    auto sum = [&](auto&& f) {
        double total = 0.0;
        for (auto const& m : messages) total += f(m);
        return total;
    };
    auto score = [](ScoredMessage const& m) { return m.normalized_score; };
    auto exp_score = [](ScoredMessage const& m) { return std::exp(m.normalized_score); };

    switch (method) {
    case AggregationMethod::Votes: return n;
    case AggregationMethod::RR: return sum([](ScoredMessage const& m) { return 1.0 / static_cast<double>(m.rank); });
    case AggregationMethod::BordaFuse:
        return sum([&](ScoredMessage const& m) {
            return static_cast<double>(pool_size) - static_cast<double>(m.rank);
        });
    case AggregationMethod::CombMIN: {
        double lowest = messages.front().normalized_score;
        for (auto const& m : messages) lowest = std::min(lowest, m.normalized_score);
        return lowest;
    }
    case AggregationMethod::CombMAX: {
        double highest = messages.front().normalized_score;
        for (auto const& m : messages) highest = std::max(highest, m.normalized_score);
        return highest;
    }
    case AggregationMethod::CombMED: {
        std::vector<double> values;
        values.reserve(messages.size());
        for (auto const& m : messages) values.push_back(m.normalized_score);
        std::sort(values.begin(), values.end());
        auto mid = values.size() / 2;
        return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    }
    case AggregationMethod::CombSUM: return sum(score);
    case AggregationMethod::CombANZ: return sum(score) / n;
    case AggregationMethod::CombGNZ:
        return std::exp(sum([](ScoredMessage const& m) { return std::log(m.normalized_score); }) / n);
    case AggregationMethod::CombMNZ: return n * sum(score);
    case AggregationMethod::ExpCombSUM: return sum(exp_score);
    case AggregationMethod::ExpCombANZ: return sum(exp_score) / n;
    case AggregationMethod::ExpCombMNZ: return n * sum(exp_score);
    }
    return 0.0;
}

ThreadRanking aggregate(AggregationMethod method, std::vector<ThreadGroup> const& groups, RankedPool const& pool) {
    ThreadRanking ranking;
    ranking.query_id = pool.query_id;
    ranking.threads.reserve(groups.size());
    for (auto const& group : groups) {
        ranking.threads.push_back(RankedThread{group.thread_id, aggregate_group(method, group, pool.size())});
    }
    sort_ranking(ranking.threads);
    return ranking;
}

ThreadRanking fuse_pool(RankedPool const& pool, AggregationMethod method, KLimit k) {
    auto normalized = normalize_pool(pool);
    return aggregate(method, group_by_thread(normalized, k), normalized);
}

ThreadRanking run_method(Query const& query, Index const& index, SmoothingParams params, std::size_t pool_size,
                         AggregationMethod method, KLimit k) {
    return fuse_pool(rank_messages(query, index, params, pool_size), method, k);
}

}  // namespace threadrank
