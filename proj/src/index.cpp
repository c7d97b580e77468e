#include "threadrank/index.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "threadrank/analysis.hpp"
#include "threadrank/error.hpp"

namespace threadrank {

Index::Index(IndexKind kind,
             std::vector<std::string> terms,
             std::vector<std::vector<Posting>> postings,
             std::vector<std::uint32_t> doc_lengths,
             std::vector<DocMeta> docs)
    : m_kind(kind),
      m_terms(std::move(terms)),
      m_postings(std::move(postings)),
      m_doc_lengths(std::move(doc_lengths)),
      m_docs(std::move(docs)) {
    if (m_terms.size() != m_postings.size()) {
        throw DataError("index: term and posting list counts differ");
    }
    if (m_doc_lengths.size() != m_docs.size()) {
        throw DataError("index: document length and metadata counts differ");
    }
    for (std::size_t i = 1; i < m_terms.size(); ++i) {
        if (!(m_terms[i - 1] < m_terms[i])) {
            throw DataError("index: vocabulary is not strictly sorted");
        }
    }
    std::vector<std::uint64_t> doc_sums(m_doc_lengths.size(), 0);
    m_collection_counts.reserve(m_postings.size());
    for (auto const& list : m_postings) {
        std::uint64_t count = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            auto const& posting = list[i];
            if (posting.tf == 0) {
                throw DataError("index: posting with zero term frequency");
            }
            if (posting.doc >= m_doc_lengths.size()) {
                throw DataError("index: posting references unknown document");
            }
            if (i > 0 && list[i - 1].doc >= posting.doc) {
                throw DataError("index: posting list is not sorted by document");
            }
            count += posting.tf;
            doc_sums[posting.doc] += posting.tf;
        }
        m_collection_counts.push_back(count);
    }
    for (std::size_t d = 0; d < m_doc_lengths.size(); ++d) {
        if (doc_sums[d] != m_doc_lengths[d]) {
            throw DataError("index: document length disagrees with its postings");
        }
        m_total_tokens += m_doc_lengths[d];
    }
}

std::optional<TermId> Index::find(std::string_view term) const {
    auto it = std::lower_bound(m_terms.begin(), m_terms.end(), term,
                               [](std::string const& a, std::string_view b) { return a < b; });
    if (it == m_terms.end() || *it != term) {
        return std::nullopt;
    }
    return static_cast<TermId>(it - m_terms.begin());
}

std::uint64_t Index::collection_count(std::string_view term) const {
    auto id = find(term);
    return id ? m_collection_counts[*id] : 0;
}

std::uint32_t Index::term_frequency(TermId id, DocRef doc) const {
    auto const& list = m_postings[id];
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](Posting const& p, DocRef d) { return p.doc < d; });
    return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

bool operator==(Index const& a, Index const& b) {
    return a.m_kind == b.m_kind && a.m_terms == b.m_terms && a.m_postings == b.m_postings
           && a.m_collection_counts == b.m_collection_counts && a.m_doc_lengths == b.m_doc_lengths
           && a.m_docs == b.m_docs && a.m_total_tokens == b.m_total_tokens;
}

double collection_prob(Index const& index, TermId term) {
    if (index.total_tokens() == 0) return 0.0;
    return static_cast<double>(index.collection_count(term)) / static_cast<double>(index.total_tokens());
}

double collection_prob(Index const& index, std::string_view term) {
    auto id = index.find(term);
    return id ? collection_prob(index, *id) : 0.0;
}

namespace {

// Accumulates documents given as token bags into an Index.
class IndexBuilder {
  public:
    DocRef add(DocMeta meta, std::vector<std::string> const& tokens) {
        auto doc = static_cast<DocRef>(m_docs.size());
        std::map<std::string_view, std::uint32_t> counts;
        for (auto const& token : tokens) {
            ++counts[token];
        }
        for (auto const& [term, tf] : counts) {
            m_postings[std::string(term)].push_back(Posting{doc, tf});
        }
        m_doc_lengths.push_back(static_cast<std::uint32_t>(tokens.size()));
        m_docs.push_back(std::move(meta));
        return doc;
    }

    Index finish(IndexKind kind) && {
        std::vector<std::string> terms;
        terms.reserve(m_postings.size());
        for (auto const& [term, _] : m_postings) {
            terms.push_back(term);
        }
        std::sort(terms.begin(), terms.end());
        std::vector<std::vector<Posting>> postings;
        postings.reserve(terms.size());
        for (auto const& term : terms) {
            postings.push_back(std::move(m_postings.at(term)));
        }
        return Index(kind, std::move(terms), std::move(postings), std::move(m_doc_lengths), std::move(m_docs));
    }

  private:
    std::unordered_map<std::string, std::vector<Posting>> m_postings;
    std::vector<std::uint32_t> m_doc_lengths;
    std::vector<DocMeta> m_docs;
};

void require_tokens(Index const& index, char const* what) {
    if (index.doc_count() == 0) {
        throw DataError(std::string(what) + ": empty corpus");
    }
    if (index.total_tokens() == 0) {
        throw DataError(std::string(what) + ": corpus has no tokens, collection model undefined");
    }
}

}  // namespace

Index build_index(std::vector<Thread> const& threads) {
    IndexBuilder builder;
    for (auto const& thread : threads) {
        for (auto const& message : thread.messages) {
            builder.add(DocMeta{message.message_id, message.thread_id, message.position}, analyze(message.text));
        }
    }
    auto index = std::move(builder).finish(IndexKind::Messages);
    require_tokens(index, "build_index");
    return index;
}

VirtualDocIndex::VirtualDocIndex(Index docs) : m_docs(std::move(docs)) {
    if (m_docs.kind() != IndexKind::VirtualDocuments) {
        throw DataError("expected a virtual-document index");
    }
}

VirtualDocIndex build_virtual_docs(std::vector<Thread> const& threads) {
    IndexBuilder builder;
    for (auto const& thread : threads) {
        std::vector<std::string> tokens;
        for (auto const& message : thread.messages) {
            auto analyzed = analyze(message.text);
            tokens.insert(tokens.end(), std::make_move_iterator(analyzed.begin()),
                          std::make_move_iterator(analyzed.end()));
        }
        builder.add(DocMeta{thread.thread_id, thread.thread_id, 0}, tokens);
    }
    auto index = std::move(builder).finish(IndexKind::VirtualDocuments);
    require_tokens(index, "build_virtual_docs");
    return VirtualDocIndex(std::move(index));
}

}  // namespace threadrank
