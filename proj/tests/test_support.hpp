#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "threadrank/corpus.hpp"

namespace test_support {

/// Removes itself on destruction.
class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        m_path = std::filesystem::temp_directory_path()
                 / ("threadrank-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    TempDir(TempDir const&) = delete;
    TempDir& operator=(TempDir const&) = delete;

    [[nodiscard]] std::filesystem::path const& path() const { return m_path; }
    [[nodiscard]] std::filesystem::path operator/(std::string const& name) const { return m_path / name; }

  private:
    std::filesystem::path m_path;
};

/// One thread t1 holding M1 = "apple banana apple" and M2 = "banana cherry".
inline std::vector<threadrank::Thread> fruit_corpus() {
    return {{"t1", {{"t1", "M1", 0, "apple banana apple"}, {"t1", "M2", 1, "banana cherry"}}}};
}

/// Same messages, one thread each.
inline std::vector<threadrank::Thread> fruit_corpus_split() {
    return {{"t1", {{"t1", "M1", 0, "apple banana apple"}}}, {"t2", {{"t2", "M2", 0, "banana cherry"}}}};
}

/// Small random corpus over a tiny vocabulary (so terms repeat a lot).
inline std::vector<threadrank::Thread> random_corpus(std::mt19937_64& rng, std::size_t max_threads,
                                                     std::size_t max_messages, std::size_t max_words) {
    static std::vector<std::string> const words = {"apple",   "banana", "cherry", "dates", "elder", "figs",
                                                   "grape",   "honey",  "ice",    "jam",   "kiwi",  "lemon",
                                                   "running", "runs",   "ponies", "12",    "boot",  "ubuntu"};
    std::uniform_int_distribution<std::size_t> thread_count(1, max_threads);
    std::uniform_int_distribution<std::size_t> message_count(1, max_messages);
    std::uniform_int_distribution<std::size_t> word_count(0, max_words);
    std::uniform_int_distribution<std::size_t> word(0, words.size() - 1);

    std::vector<threadrank::Thread> threads;
    auto n_threads = thread_count(rng);
    std::size_t message_no = 0;
    for (std::size_t t = 0; t < n_threads; ++t) {
        threadrank::Thread thread{"T" + std::to_string(t), {}};
        auto n_messages = message_count(rng);
        for (std::size_t m = 0; m < n_messages; ++m) {
            std::string text;
            auto n_words = word_count(rng);
            for (std::size_t w = 0; w < n_words; ++w) text += words[word(rng)] + (w % 3 == 2 ? ", " : " ");
            thread.messages.push_back({thread.thread_id, "M" + std::to_string(message_no++),
                                       static_cast<std::uint32_t>(m), text});
        }
        threads.push_back(std::move(thread));
    }
    // Guarantee at least one token.
    threads.front().messages.front().text += " apple";
    return threads;
}

}  // namespace test_support
