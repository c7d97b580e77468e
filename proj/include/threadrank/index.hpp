#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "threadrank/corpus.hpp"

namespace threadrank {

/// Dense document number: a message, or a thread in a virtual-document index.
using DocRef = std::uint32_t;
using TermId = std::uint32_t;

struct Posting {
    DocRef doc = 0;
    std::uint32_t tf = 0;  ///< n(q, M), always >= 1

    friend bool operator==(Posting const&, Posting const&) = default;
};

struct DocMeta {
    std::string message_id;  ///< equals thread_id for virtual documents
    std::string thread_id;
    std::uint32_t position = 0;

    friend bool operator==(DocMeta const&, DocMeta const&) = default;
};

enum class IndexKind : std::uint32_t { Messages = 0, VirtualDocuments = 1 };

/// Immutable inverted index with the collection statistics needed for
/// Dirichlet-smoothed query likelihood.
///
/// Invariants (checked on construction):
///  - terms are unique and sorted; every posting list is sorted by doc with tf >= 1
///  - collection_count(t) is the sum of the posting tfs of t
///  - total_tokens() is the sum of all document lengths
class Index {
  public:
    Index() = default;
    Index(IndexKind kind,
          std::vector<std::string> terms,
          std::vector<std::vector<Posting>> postings,
          std::vector<std::uint32_t> doc_lengths,
          std::vector<DocMeta> docs);

    [[nodiscard]] IndexKind kind() const noexcept { return m_kind; }
    [[nodiscard]] std::size_t term_count() const noexcept { return m_terms.size(); }
    [[nodiscard]] std::size_t doc_count() const noexcept { return m_doc_lengths.size(); }
    [[nodiscard]] std::uint64_t total_tokens() const noexcept { return m_total_tokens; }

    [[nodiscard]] std::optional<TermId> find(std::string_view term) const;
    [[nodiscard]] std::string const& term(TermId id) const { return m_terms[id]; }
    [[nodiscard]] std::span<Posting const> postings(TermId id) const { return m_postings[id]; }
    [[nodiscard]] std::uint64_t collection_count(TermId id) const { return m_collection_counts[id]; }
    /// 0 for terms that are not in the vocabulary.
    [[nodiscard]] std::uint64_t collection_count(std::string_view term) const;

    [[nodiscard]] std::uint32_t doc_length(DocRef doc) const { return m_doc_lengths[doc]; }
    [[nodiscard]] DocMeta const& doc(DocRef doc) const { return m_docs[doc]; }

    [[nodiscard]] std::vector<std::string> const& terms() const noexcept { return m_terms; }
    [[nodiscard]] std::vector<std::uint32_t> const& doc_lengths() const noexcept { return m_doc_lengths; }
    [[nodiscard]] std::vector<DocMeta> const& docs() const noexcept { return m_docs; }

    /// Term frequency of a term in a document (binary search over the posting list).
    [[nodiscard]] std::uint32_t term_frequency(TermId id, DocRef doc) const;

    friend bool operator==(Index const& a, Index const& b);

  private:
    IndexKind m_kind = IndexKind::Messages;
    std::vector<std::string> m_terms;
    std::vector<std::vector<Posting>> m_postings;
    std::vector<std::uint64_t> m_collection_counts;
    std::vector<std::uint32_t> m_doc_lengths;
    std::vector<DocMeta> m_docs;
    std::uint64_t m_total_tokens = 0;
};

/// P(q|C) = collection_count(q) / |C|; 0 for unseen terms.
[[nodiscard]] double collection_prob(Index const& index, std::string_view term);
[[nodiscard]] double collection_prob(Index const& index, TermId term);

/// One document per message, in corpus order. Throws DataError on an empty corpus
/// (or one without a single token).
[[nodiscard]] Index build_index(std::vector<Thread> const& threads);

/// Thread-level index: one document per thread holding all of its message
/// tokens concatenated in position order. Carries its own collection
/// statistics, whose totals coincide with the message index.
class VirtualDocIndex {
  public:
    VirtualDocIndex() = default;
    /// Throws DataError unless the index is of kind VirtualDocuments.
    explicit VirtualDocIndex(Index docs);

    [[nodiscard]] Index const& docs() const noexcept { return m_docs; }

    friend bool operator==(VirtualDocIndex const&, VirtualDocIndex const&) = default;

  private:
    Index m_docs;
};

[[nodiscard]] VirtualDocIndex build_virtual_docs(std::vector<Thread> const& threads);

/// Writes the files meta, postings, doclens and docmeta into `dir`
/// (created if needed). The byte layout is documented in docs/index-format.md.
void save_index(Index const& index, std::filesystem::path const& dir);

/// Throws VersionError on bad magic/version and IntegrityError on truncated
/// or corrupted files.
[[nodiscard]] Index load_index(std::filesystem::path const& dir);

}  // namespace threadrank
