#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace threadrank {

struct Message {
    std::string thread_id;
    std::string message_id;
    std::uint32_t position = 0;  ///< 0 is the initial message.
    std::string text;

    friend bool operator==(Message const&, Message const&) = default;
};

/// A discussion thread: the initial message plus its replies, ordered by position.
struct Thread {
    std::string thread_id;
    std::vector<Message> messages;

    friend bool operator==(Thread const&, Thread const&) = default;
};

struct Query {
    std::string query_id;
    std::string text;
    std::vector<std::string> terms;  ///< analyze(text), in text order.

    friend bool operator==(Query const&, Query const&) = default;
};

[[nodiscard]] Query make_query(std::string query_id, std::string text);

/// Graded relevance judgments in {0, 1, 2}. Unjudged pairs are absent.
class Qrels {
  public:
    void add(std::string const& query_id, std::string const& thread_id, int grade);

    /// Grade for a pair, 0 when unjudged.
    [[nodiscard]] int grade(std::string const& query_id, std::string const& thread_id) const;

    /// Judged threads of a query (empty map when the query is unknown).
    [[nodiscard]] std::map<std::string, int> const& judgments(std::string const& query_id) const;

    [[nodiscard]] std::vector<std::string> query_ids() const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool empty() const { return m_judgments.empty(); }

  private:
    std::map<std::string, std::map<std::string, int>> m_judgments;
};

/// Corpus format: one JSON object per line with fields thread_id, message_id,
/// position and text. An optional "title" field is prepended to the text.
/// Threads keep first-appearance order; messages are sorted by position.
[[nodiscard]] std::vector<Thread> parse_corpus(std::istream& in, std::string const& source = "corpus");
void write_corpus(std::ostream& out, std::vector<Thread> const& threads);

/// Queries: `query_id<TAB>query text` per line. Blank lines are skipped.
[[nodiscard]] std::vector<Query> parse_queries(std::istream& in, std::string const& source = "queries");
void write_queries(std::ostream& out, std::vector<Query> const& queries);

/// Qrels in TREC format: `query_id 0 thread_id grade`.
[[nodiscard]] Qrels parse_qrels(std::istream& in, std::string const& source = "qrels");
void write_qrels(std::ostream& out, Qrels const& qrels);

/// Convenience loaders that open a file and report the path in errors.
[[nodiscard]] std::vector<Thread> load_corpus(std::string const& path);
[[nodiscard]] std::vector<Query> load_queries(std::string const& path);
[[nodiscard]] Qrels load_qrels(std::string const& path);

}  // namespace threadrank
