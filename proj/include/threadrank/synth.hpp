#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "threadrank/corpus.hpp"

namespace threadrank {

/// Parameters of the topic-mixture forum generator.
///
/// Every thread has a topic and a distractor topic. Its initial message is on topic;
/// each reply is on topic with probability `concentration`. On-topic messages mix
/// topic words with background words; off-topic messages use background words and,
/// with probability `distractor_rate`, one word of the distractor topic. Long
/// off-topic threads therefore carry many weak matches for other topics' queries.
struct SynthSpec {
    std::uint64_t seed = 42;
    std::size_t thread_count = 200;
    std::size_t min_messages = 1;
    std::size_t max_messages = 25;
    std::size_t vocabulary_size = 3000;
    std::size_t topic_count = 20;
    double concentration = 0.3;  ///< in (0, 1]
    std::size_t query_count = 10;
    std::size_t min_words = 10;  ///< per message
    std::size_t max_words = 40;
    double topic_word_rate = 0.4;   ///< share of topic words in an on-topic message
    double distractor_rate = 0.5;
    std::size_t query_terms = 3;

    /// Throws std::invalid_argument for out-of-range values and a vocabulary that is
    /// too small for the topic count.
    void validate() const;
};

struct SynthData {
    std::vector<Thread> threads;
    std::vector<Query> queries;
    Qrels qrels;

    /// Serialized in the corpus, query and qrels file formats.
    std::string corpus_text;
    std::string queries_text;
    std::string qrels_text;
};

/// Deterministic for a given spec, independent of the standard library's distributions.
///
/// Judgments per query: threads of the query's topic get grade 2 with two or more
/// on-topic messages and grade 1 otherwise; other threads that mention a query
/// term are judged 0.
[[nodiscard]] SynthData generate(SynthSpec const& spec);

/// Writes corpus.jsonl, queries.tsv and qrels.txt into `dir`.
void write_synth(SynthData const& data, std::filesystem::path const& dir);

}  // namespace threadrank
