#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threadrank/ranking.hpp"
#include "threadrank/scoring.hpp"

namespace threadrank {

/// Voting / data-fusion methods for turning a ranked message pool into a thread ranking.
enum class AggregationMethod {
    Votes,
    RR,
    BordaFuse,
    CombMIN,
    CombMAX,
    CombMED,
    CombSUM,
    CombANZ,
    CombGNZ,
    CombMNZ,
    ExpCombSUM,
    ExpCombANZ,
    ExpCombMNZ,
};

inline constexpr std::array kAllMethods = {
    AggregationMethod::Votes,      AggregationMethod::RR,         AggregationMethod::BordaFuse,
    AggregationMethod::CombMIN,    AggregationMethod::CombMAX,    AggregationMethod::CombMED,
    AggregationMethod::CombSUM,    AggregationMethod::CombANZ,    AggregationMethod::CombGNZ,
    AggregationMethod::CombMNZ,    AggregationMethod::ExpCombSUM, AggregationMethod::ExpCombANZ,
    AggregationMethod::ExpCombMNZ,
};

/// Lowercase name used on the command line, e.g. "combsum", "expcombmnz".
[[nodiscard]] std::string_view method_name(AggregationMethod method);
[[nodiscard]] std::optional<AggregationMethod> parse_method(std::string_view name);

/// Votes, RR and BordaFuse use only ranks.
[[nodiscard]] bool is_rank_based(AggregationMethod method);

/// How many of a thread's top-ranked messages are aggregated.
class KLimit {
  public:
    /// Basic mode: every ranked message of the thread.
    static KLimit unlimited() { return KLimit(0); }
    /// Throws std::invalid_argument when k == 0.
    static KLimit top(std::size_t k);
    /// Accepts a positive integer or "unlimited".
    static KLimit parse(std::string_view text);

    [[nodiscard]] bool bounded() const noexcept { return m_k != 0; }
    [[nodiscard]] std::size_t value() const noexcept { return m_k; }
    [[nodiscard]] std::size_t apply(std::size_t group_size) const noexcept {
        return bounded() && m_k < group_size ? m_k : group_size;
    }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(KLimit, KLimit) = default;

  private:
    explicit KLimit(std::size_t k) : m_k(k) {}
    std::size_t m_k;
};

/// R_T for one thread plus its top-k prefix R_{T,L}. No padding when |R_T| < k.
struct ThreadGroup {
    std::string thread_id;
    std::vector<ScoredMessage> members;    ///< in pool order
    std::vector<ScoredMessage> truncated;  ///< first min(k, |members|) members
};

/// Groups are returned in order of their best-ranked message.
[[nodiscard]] std::vector<ThreadGroup> group_by_thread(RankedPool const& pool, KLimit k);

/// Aggregate score of a single group; `pool_size` is |R_Q|.
[[nodiscard]] double aggregate_group(AggregationMethod method, ThreadGroup const& group, std::size_t pool_size);

/// Scores every group and sorts by (score desc, thread_id asc).
[[nodiscard]] ThreadRanking aggregate(AggregationMethod method, std::vector<ThreadGroup> const& groups,
                                      RankedPool const& pool);

/// rank_messages -> normalize_pool -> group_by_thread -> aggregate.
[[nodiscard]] ThreadRanking run_method(Query const& query, Index const& index, SmoothingParams params,
                                       std::size_t pool_size, AggregationMethod method, KLimit k);

/// normalize_pool -> group_by_thread -> aggregate on an already ranked pool.
[[nodiscard]] ThreadRanking fuse_pool(RankedPool const& pool, AggregationMethod method, KLimit k);

}  // namespace threadrank
