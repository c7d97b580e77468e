#pragma once

#include <string>
#include <vector>

namespace threadrank {

struct RankedThread {
    std::string thread_id;
    double score = 0.0;

    friend bool operator==(RankedThread const&, RankedThread const&) = default;
};

/// Threads ordered by score descending, thread_id ascending on ties. Each thread appears once.
struct ThreadRanking {
    std::string query_id;
    std::vector<RankedThread> threads;

    friend bool operator==(ThreadRanking const&, ThreadRanking const&) = default;
};

/// Sorts into ThreadRanking order.
void sort_ranking(std::vector<RankedThread>& threads);

[[nodiscard]] std::vector<std::string> thread_order(ThreadRanking const& ranking);

}  // namespace threadrank
