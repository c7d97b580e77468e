#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_support.hpp"
#include "threadrank/scoring.hpp"

using namespace threadrank;

namespace {

RankedPool pool_from_logs(std::vector<double> const& logs) {
    RankedPool pool;
    pool.query_id = "q";
    for (std::size_t i = 0; i < logs.size(); ++i) {
        pool.entries.push_back(ScoredMessage{static_cast<DocRef>(i), "m" + std::to_string(i), "t", logs[i], 0.0, 0});
    }
    pool.pool_size_limit = logs.size();
    finalize_pool(pool.entries, logs.size());
    return pool;
}

}  // namespace

TEST_CASE("log_query_likelihood on the fruit corpus") {
    auto index = build_index(test_support::fruit_corpus());
    SmoothingParams mu1{1.0};
    auto apple = make_query("q", "apple");
    CHECK(log_query_likelihood(apple, 0, index, mu1) == doctest::Approx(std::log(0.6)).epsilon(1e-14));
    CHECK(log_query_likelihood(apple, 1, index, mu1) == doctest::Approx(std::log(0.4 / 3.0)).epsilon(1e-14));

    CHECK(log_query_likelihood(make_query("q", ""), 0, index, mu1) == 0.0);

    auto twice = make_query("q", "apple apple");
    CHECK(log_query_likelihood(twice, 1, index, mu1) == doctest::Approx(2.0 * log_query_likelihood(apple, 1, index, mu1)));

    // Unseen terms contribute nothing.
    auto with_unseen = make_query("q", "apple durian");
    CHECK(log_query_likelihood(with_unseen, 0, index, mu1) == log_query_likelihood(apple, 0, index, mu1));
}

TEST_CASE("rank_messages candidate rule, ordering and truncation") {
    auto index = build_index(test_support::fruit_corpus());
    SmoothingParams mu1{1.0};

    auto apple = rank_messages(make_query("q1", "apple"), index, mu1, 500);
    REQUIRE(apple.size() == 1);
    CHECK(apple.entries[0].message_id == "M1");
    CHECK(apple.entries[0].rank == 1);
    CHECK(apple.entries[0].log_score == doctest::Approx(std::log(0.6)));
    CHECK(apple.query_id == "q1");

    auto banana = rank_messages(make_query("q2", "banana"), index, mu1, 500);
    REQUIRE(banana.size() == 2);
    CHECK(banana.entries[0].message_id == "M2");
    CHECK(banana.entries[0].log_score == doctest::Approx(std::log(1.4 / 3.0)));
    CHECK(banana.entries[1].message_id == "M1");
    CHECK(banana.entries[1].log_score == doctest::Approx(std::log(0.35)));
    CHECK(banana.entries[1].rank == 2);

    auto top1 = rank_messages(make_query("q2", "banana"), index, mu1, 1);
    REQUIRE(top1.size() == 1);
    CHECK(top1.entries[0].message_id == "M2");
    CHECK(top1.pool_size_limit == 1);
}

TEST_CASE("queries without indexed terms give an empty pool") {
    auto index = build_index(test_support::fruit_corpus());
    auto pool = rank_messages(make_query("q", "durian Durian kumquat"), index, SmoothingParams{1.0}, 10);
    CHECK(pool.empty());
    CHECK(pool.skipped_terms == std::vector<std::string>{"durian", "kumquat"});
    CHECK(rank_messages(make_query("q", ""), index, SmoothingParams{1.0}, 10).empty());
}

TEST_CASE("invalid scoring parameters") {
    auto index = build_index(test_support::fruit_corpus());
    auto q = make_query("q", "apple");
    CHECK_THROWS_AS((void)rank_messages(q, index, SmoothingParams{1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)rank_messages(q, index, SmoothingParams{0.0}, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)rank_messages(q, index, SmoothingParams{-5.0}, 10), std::invalid_argument);
}

TEST_CASE("ties are broken by message id") {
    std::vector<Thread> threads = {{"t", {{"t", "b", 0, "same words"}, {"t", "a", 1, "same words"}, {"t", "c", 2, "other"}}}};
    auto index = build_index(threads);
    auto pool = rank_messages(make_query("q", "words"), index, SmoothingParams{10.0}, 10);
    REQUIRE(pool.size() == 2);
    CHECK(pool.entries[0].message_id == "a");
    CHECK(pool.entries[1].message_id == "b");
}

TEST_CASE("rank_virtual_docs") {
    SmoothingParams mu1{1.0};
    SUBCASE("fruit corpus as one thread") {
        auto vd = build_virtual_docs(test_support::fruit_corpus());
        auto ranking = rank_virtual_docs(make_query("q", "cherry"), vd, mu1, 10);
        REQUIRE(ranking.threads.size() == 1);
        CHECK(ranking.threads[0].thread_id == "t1");
        CHECK(ranking.threads[0].score == doctest::Approx(std::log(0.2)));
    }
    SUBCASE("identical threads tie on id") {
        std::vector<Thread> threads = {{"tb", {{"tb", "m1", 0, "boot failure"}}}, {"ta", {{"ta", "m2", 0, "boot failure"}}}};
        auto ranking = rank_virtual_docs(make_query("q", "boot"), build_virtual_docs(threads), mu1, 10);
        REQUIRE(ranking.threads.size() == 2);
        CHECK(ranking.threads[0].thread_id == "ta");
        CHECK(ranking.threads[1].thread_id == "tb");
        CHECK(ranking.threads[0].score == ranking.threads[1].score);
    }
}

TEST_CASE("normalize_pool") {
    auto pool = normalize_pool(pool_from_logs({-1.0, -2.0, -3.0}));
    CHECK(pool.entries[0].normalized_score == 1.0);
    CHECK(pool.entries[1].normalized_score == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(pool.entries[2].normalized_score == doctest::Approx(0.1353352832366127).epsilon(1e-14));

    CHECK(normalize_pool(pool_from_logs({-42.0})).entries[0].normalized_score == 1.0);
    CHECK(normalize_pool(RankedPool{}).empty());

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> score(-50.0, 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> logs(1 + rng() % 20);
        for (auto& l : logs) l = score(rng);
        auto base = normalize_pool(pool_from_logs(logs));
        for (auto& l : logs) l += 17.25;
        auto shifted = normalize_pool(pool_from_logs(logs));
        for (std::size_t i = 0; i < logs.size(); ++i) {
            CHECK(shifted.entries[i].message_id == base.entries[i].message_id);
            CHECK(shifted.entries[i].rank == base.entries[i].rank);
            CHECK(shifted.entries[i].normalized_score == doctest::Approx(base.entries[i].normalized_score).epsilon(1e-12));
            CHECK(base.entries[i].normalized_score > 0.0);
            CHECK(base.entries[i].normalized_score <= 1.0);
        }
        CHECK(base.entries[0].normalized_score == 1.0);
    }
}

TEST_CASE("indexed ranking matches direct evaluation from raw text") {
    std::mt19937_64 rng(2024);
    std::vector<std::string> queries = {"apple", "banana cherry", "running ponies ponies", "12 boot ubuntu kiwi",
                                        "lemon lemon honey durian"};
    for (int trial = 0; trial < 30; ++trial) {
        auto threads = test_support::random_corpus(rng, 10, 8, 15);
        auto index = build_index(threads);
        for (double mu : {1.0, 50.0, 2500.0}) {
            for (auto const& text : queries) {
                auto expected = oracle::rank_by_direct_evaluation(threads, text, mu);
                auto pool = rank_messages(make_query("q", text), index, SmoothingParams{mu}, 100000);
                REQUIRE(pool.size() == expected.size());
                for (std::size_t i = 0; i < expected.size(); ++i) {
                    CHECK(pool.entries[i].message_id == expected[i].message_id);
                    CHECK(std::abs(pool.entries[i].log_score - expected[i].log_score) <= 1e-9);
                    CHECK(pool.entries[i].rank == i + 1);
                }
            }
        }
    }
}

TEST_CASE("a smaller pool is a prefix of a larger one") {
    std::mt19937_64 rng(99);
    auto index = build_index(test_support::random_corpus(rng, 20, 10, 15));
    auto query = make_query("q", "apple banana kiwi");
    auto big = rank_messages(query, index, SmoothingParams{100.0}, 100000);
    for (std::size_t limit : {1UL, 3UL, 10UL, 25UL}) {
        auto small = rank_messages(query, index, SmoothingParams{100.0}, limit);
        REQUIRE(small.size() == std::min(limit, big.size()));
        for (std::size_t i = 0; i < small.size(); ++i) CHECK(small.entries[i] == big.entries[i]);
    }
}

TEST_CASE("huge mu makes every candidate score the collection likelihood") {
    std::mt19937_64 rng(1);
    auto index = build_index(test_support::random_corpus(rng, 10, 8, 15));
    auto pool = rank_messages(make_query("q", "apple banana ponies"), index, SmoothingParams{1e12}, 100000);
    REQUIRE(pool.size() > 1);
    for (auto const& entry : pool.entries) {
        CHECK(std::abs(entry.log_score - pool.entries.front().log_score) <= 1e-6);
    }
}

TEST_CASE("more occurrences at equal length never lower the score") {
    std::vector<Thread> threads = {{"t", {}}};
    constexpr std::uint32_t length = 8;
    for (std::uint32_t j = 0; j <= length; ++j) {
        std::string text;
        for (std::uint32_t w = 0; w < length; ++w) text += (w < j ? "boot " : "kernel ");
        threads[0].messages.push_back({"t", "m" + std::to_string(j), j, text});
    }
    auto index = build_index(threads);
    for (double mu : {1.0, 100.0, 3000.0}) {
        for (DocRef d = 1; d <= length; ++d) {
            CHECK(log_query_likelihood(make_query("q", "boot"), d, index, SmoothingParams{mu})
                  >= log_query_likelihood(make_query("q", "boot"), d - 1, index, SmoothingParams{mu}));
        }
    }
}
