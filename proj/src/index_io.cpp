#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

#include "threadrank/error.hpp"
#include "threadrank/index.hpp"

namespace threadrank {

namespace {

constexpr std::array<char, 8> kMagic = {'T', 'H', 'R', 'D', 'R', 'A', 'N', 'K'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderSize = kMagic.size() + 4 + 4;
constexpr std::size_t kTrailerSize = 8;

enum class Section : std::uint32_t { Meta = 1, Postings = 2, DocLens = 3, DocMeta = 4 };

char const* section_file(Section section) {
    switch (section) {
    case Section::Meta: return "meta";
    case Section::Postings: return "postings";
    case Section::DocLens: return "doclens";
    case Section::DocMeta: return "docmeta";
    }
    return "?";
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

class ByteWriter {
  public:
    explicit ByteWriter(Section section) {
        m_buffer.append(kMagic.data(), kMagic.size());
        u32(kFormatVersion);
        u32(static_cast<std::uint32_t>(section));
    }

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) m_buffer.push_back(static_cast<char>((v >> (8 * i)) & 0xffU));
    }

    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) m_buffer.push_back(static_cast<char>((v >> (8 * i)) & 0xffU));
    }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        m_buffer.append(s);
    }

    void write(std::filesystem::path const& path) && {
        u64(fnv1a(m_buffer));
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(m_buffer.data(), static_cast<std::streamsize>(m_buffer.size()));
            if (!out) {
                throw DataError("cannot write " + tmp.string());
            }
        }
        std::filesystem::rename(tmp, path);
    }

  private:
    std::string m_buffer;
};

class ByteReader {
  public:
    ByteReader(std::filesystem::path const& dir, Section section) : m_name((dir / section_file(section)).string()) {
        std::ifstream in(dir / section_file(section), std::ios::binary);
        if (!in) {
            throw DataError("cannot open " + m_name);
        }
        m_buffer.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());

        if (m_buffer.size() >= kMagic.size() && std::memcmp(m_buffer.data(), kMagic.data(), kMagic.size()) != 0) {
            throw VersionError(m_name + ": not a threadrank index file (bad magic)");
        }
        if (m_buffer.size() < kHeaderSize + kTrailerSize) {
            throw IntegrityError(m_name + ": truncated file");
        }
        m_pos = kMagic.size();
        auto version = u32();
        if (version != kFormatVersion) {
            throw VersionError(m_name + ": unsupported format version " + std::to_string(version));
        }
        if (u32() != static_cast<std::uint32_t>(section)) {
            throw IntegrityError(m_name + ": unexpected section tag");
        }
        m_end = m_buffer.size() - kTrailerSize;
        auto stored = m_pos;
        m_pos = m_end;
        auto checksum = u64_unchecked();
        m_pos = stored;
        if (checksum != fnv1a(std::string_view(m_buffer).substr(0, m_end))) {
            throw IntegrityError(m_name + ": checksum mismatch (truncated or corrupted)");
        }
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte(m_pos + i)) << (8 * i);
        m_pos += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        return u64_unchecked();
    }

    std::string str() {
        auto length = u32();
        need(length);
        std::string s = m_buffer.substr(m_pos, length);
        m_pos += length;
        return s;
    }

    void finish() const {
        if (m_pos != m_end) {
            throw IntegrityError(m_name + ": trailing bytes");
        }
    }

    [[nodiscard]] std::string const& name() const { return m_name; }

  private:
    [[nodiscard]] unsigned char byte(std::size_t i) const { return static_cast<unsigned char>(m_buffer[i]); }

    std::uint64_t u64_unchecked() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte(m_pos + i)) << (8 * i);
        m_pos += 8;
        return v;
    }

    void need(std::size_t n) const {
        if (m_end - m_pos < n) {
            throw IntegrityError(m_name + ": unexpected end of data");
        }
    }

    std::string m_name;
    std::string m_buffer;
    std::size_t m_pos = 0;
    std::size_t m_end = 0;
};

}  // namespace

void save_index(Index const& index, std::filesystem::path const& dir) {
    std::filesystem::create_directories(dir);

    std::uint64_t posting_count = 0;
    for (TermId t = 0; t < index.term_count(); ++t) {
        posting_count += index.postings(t).size();
    }

    ByteWriter meta(Section::Meta);
    meta.u32(static_cast<std::uint32_t>(index.kind()));
    meta.u64(index.doc_count());
    meta.u64(index.term_count());
    meta.u64(index.total_tokens());
    meta.u64(posting_count);
    std::move(meta).write(dir / section_file(Section::Meta));

    ByteWriter postings(Section::Postings);
    for (TermId t = 0; t < index.term_count(); ++t) {
        postings.str(index.term(t));
        postings.u64(index.collection_count(t));
        auto list = index.postings(t);
        postings.u32(static_cast<std::uint32_t>(list.size()));
        for (auto const& p : list) {
            postings.u32(p.doc);
            postings.u32(p.tf);
        }
    }
    std::move(postings).write(dir / section_file(Section::Postings));

    ByteWriter doclens(Section::DocLens);
    for (auto length : index.doc_lengths()) {
        doclens.u32(length);
    }
    std::move(doclens).write(dir / section_file(Section::DocLens));

    ByteWriter docmeta(Section::DocMeta);
    for (auto const& doc : index.docs()) {
        docmeta.str(doc.message_id);
        docmeta.str(doc.thread_id);
        docmeta.u32(doc.position);
    }
    std::move(docmeta).write(dir / section_file(Section::DocMeta));
}

Index load_index(std::filesystem::path const& dir) {
    ByteReader meta(dir, Section::Meta);
    auto kind_value = meta.u32();
    if (kind_value > static_cast<std::uint32_t>(IndexKind::VirtualDocuments)) {
        throw VersionError(meta.name() + ": unknown index kind " + std::to_string(kind_value));
    }
    auto doc_count = meta.u64();
    auto term_count = meta.u64();
    auto total_tokens = meta.u64();
    auto posting_count = meta.u64();
    meta.finish();

    ByteReader postings_in(dir, Section::Postings);
    std::vector<std::string> terms;
    std::vector<std::vector<Posting>> postings;
    std::vector<std::uint64_t> stored_counts;
    std::uint64_t seen_postings = 0;
    for (std::uint64_t t = 0; t < term_count; ++t) {
        terms.push_back(postings_in.str());
        stored_counts.push_back(postings_in.u64());
        auto df = postings_in.u32();
        std::vector<Posting> list;
        for (std::uint32_t i = 0; i < df; ++i) {
            Posting p;
            p.doc = postings_in.u32();
            p.tf = postings_in.u32();
            list.push_back(p);
        }
        seen_postings += df;
        postings.push_back(std::move(list));
    }
    postings_in.finish();
    if (seen_postings != posting_count) {
        throw IntegrityError(postings_in.name() + ": posting count disagrees with meta");
    }

    ByteReader doclens_in(dir, Section::DocLens);
    std::vector<std::uint32_t> doc_lengths;
    for (std::uint64_t d = 0; d < doc_count; ++d) {
        doc_lengths.push_back(doclens_in.u32());
    }
    doclens_in.finish();

    ByteReader docmeta_in(dir, Section::DocMeta);
    std::vector<DocMeta> docs;
    for (std::uint64_t d = 0; d < doc_count; ++d) {
        DocMeta doc;
        doc.message_id = docmeta_in.str();
        doc.thread_id = docmeta_in.str();
        doc.position = docmeta_in.u32();
        docs.push_back(std::move(doc));
    }
    docmeta_in.finish();

    Index index;
    try {
        index = Index(static_cast<IndexKind>(kind_value), std::move(terms), std::move(postings),
                      std::move(doc_lengths), std::move(docs));
    } catch (IntegrityError const&) {
        throw;
    } catch (DataError const& e) {
        throw IntegrityError(dir.string() + ": " + e.what());
    }
    if (index.total_tokens() != total_tokens) {
        throw IntegrityError(meta.name() + ": total token count disagrees with document lengths");
    }
    for (TermId t = 0; t < index.term_count(); ++t) {
        if (index.collection_count(t) != stored_counts[t]) {
            throw IntegrityError(postings_in.name() + ": collection count disagrees with postings");
        }
    }
    return index;
}

}  // namespace threadrank
