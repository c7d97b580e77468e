#include "threadrank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "threadrank/analysis.hpp"
#include "threadrank/error.hpp"

namespace threadrank {

namespace {

std::string json_identifier(nlohmann::json const& object, char const* field, std::string const& source,
                            std::size_t line) {
    auto it = object.find(field);
    if (it == object.end()) {
        throw ParseError(source, line, std::string("missing field '") + field + "'");
    }
    if (it->is_string()) {
        auto value = it->get<std::string>();
        if (value.empty()) {
            throw ParseError(source, line, std::string("empty field '") + field + "'");
        }
        return value;
    }
    if (it->is_number_integer()) {
        return std::to_string(it->get<std::int64_t>());
    }
    throw ParseError(source, line, std::string("field '") + field + "' must be a string or integer");
}

bool is_blank(std::string const& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

template <typename T>
T load_file(std::string const& path, T (*parse)(std::istream&, std::string const&)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    return parse(in, path);
}

}  // namespace

Query make_query(std::string query_id, std::string text) {
    Query query{std::move(query_id), std::move(text), {}};
    query.terms = analyze(query.text);
    return query;
}

void Qrels::add(std::string const& query_id, std::string const& thread_id, int grade) {
    if (grade < 0 || grade > 2) {
        throw DataError("relevance grade must be 0, 1 or 2, got " + std::to_string(grade));
    }
    auto [it, inserted] = m_judgments[query_id].emplace(thread_id, grade);
    if (!inserted) {
        throw DataError("duplicate judgment for (" + query_id + ", " + thread_id + ")");
    }
}

int Qrels::grade(std::string const& query_id, std::string const& thread_id) const {
    auto q = m_judgments.find(query_id);
    if (q == m_judgments.end()) return 0;
    auto t = q->second.find(thread_id);
    return t == q->second.end() ? 0 : t->second;
}

std::map<std::string, int> const& Qrels::judgments(std::string const& query_id) const {
    static std::map<std::string, int> const none;
    auto q = m_judgments.find(query_id);
    return q == m_judgments.end() ? none : q->second;
}

std::vector<std::string> Qrels::query_ids() const {
    std::vector<std::string> ids;
    ids.reserve(m_judgments.size());
    for (auto const& [id, _] : m_judgments) {
        ids.push_back(id);
    }
    return ids;
}

std::size_t Qrels::size() const {
    std::size_t n = 0;
    for (auto const& [_, judged] : m_judgments) {
        n += judged.size();
    }
    return n;
}

std::vector<Thread> parse_corpus(std::istream& in, std::string const& source) {
    std::vector<Thread> threads;
    std::unordered_map<std::string, std::size_t> thread_slot;
    std::set<std::string> message_ids;
    std::set<std::pair<std::string, std::uint32_t>> positions;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) continue;

        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (nlohmann::json::parse_error const& e) {
            throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!object.is_object()) {
            throw ParseError(source, line_no, "expected a JSON object");
        }

        Message message;
        message.thread_id = json_identifier(object, "thread_id", source, line_no);
        message.message_id = json_identifier(object, "message_id", source, line_no);

        auto pos = object.find("position");
        if (pos == object.end()) {
            throw ParseError(source, line_no, "missing field 'position'");
        }
        if (!pos->is_number_integer() || pos->get<std::int64_t>() < 0
            || pos->get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
            throw ParseError(source, line_no, "field 'position' must be a non-negative integer");
        }
        message.position = static_cast<std::uint32_t>(pos->get<std::int64_t>());

        auto text = object.find("text");
        if (text == object.end()) {
            throw ParseError(source, line_no, "missing field 'text'");
        }
        if (!text->is_string()) {
            throw ParseError(source, line_no, "field 'text' must be a string");
        }
        message.text = text->get<std::string>();
        if (auto title = object.find("title"); title != object.end() && !title->is_null()) {
            if (!title->is_string()) {
                throw ParseError(source, line_no, "field 'title' must be a string");
            }
            message.text = title->get<std::string>() + "\n" + message.text;
        }

        if (!message_ids.insert(message.message_id).second) {
            throw ParseError(source, line_no, "duplicate message_id '" + message.message_id + "'");
        }
        if (!positions.emplace(message.thread_id, message.position).second) {
            throw ParseError(source, line_no,
                             "duplicate position " + std::to_string(message.position) + " in thread '"
                                 + message.thread_id + "'");
        }

        auto [slot, fresh] = thread_slot.emplace(message.thread_id, threads.size());
        if (fresh) {
            threads.push_back(Thread{message.thread_id, {}});
        }
        threads[slot->second].messages.push_back(std::move(message));
    }
    if (in.bad()) {
        throw DataError(source + ": read error");
    }

    for (auto& thread : threads) {
        std::sort(thread.messages.begin(), thread.messages.end(),
                  [](Message const& a, Message const& b) { return a.position < b.position; });
    }
    return threads;
}

void write_corpus(std::ostream& out, std::vector<Thread> const& threads) {
    for (auto const& thread : threads) {
        for (auto const& message : thread.messages) {
            nlohmann::ordered_json object;
            object["thread_id"] = message.thread_id;
            object["message_id"] = message.message_id;
            object["position"] = message.position;
            object["text"] = message.text;
            out << object.dump() << '\n';
        }
    }
}

std::vector<Query> parse_queries(std::istream& in, std::string const& source) {
    std::vector<Query> queries;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(source, line_no, "expected 'query_id<TAB>text'");
        }
        auto id = line.substr(0, tab);
        if (id.empty()) {
            throw ParseError(source, line_no, "empty query id");
        }
        if (!seen.insert(id).second) {
            throw ParseError(source, line_no, "duplicate query id '" + id + "'");
        }
        queries.push_back(make_query(std::move(id), line.substr(tab + 1)));
    }
    return queries;
}

void write_queries(std::ostream& out, std::vector<Query> const& queries) {
    for (auto const& query : queries) {
        out << query.query_id << '\t' << query.text << '\n';
    }
}

Qrels parse_qrels(std::istream& in, std::string const& source) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) continue;
        std::istringstream fields(line);
        std::string query_id, iteration, thread_id, grade_text, extra;
        if (!(fields >> query_id >> iteration >> thread_id >> grade_text) || (fields >> extra)) {
            throw ParseError(source, line_no, "expected 'query_id 0 thread_id grade'");
        }
        int grade = 0;
        try {
            std::size_t consumed = 0;
            grade = std::stoi(grade_text, &consumed);
            if (consumed != grade_text.size()) throw std::invalid_argument(grade_text);
        } catch (std::logic_error const&) {
            throw ParseError(source, line_no, "grade '" + grade_text + "' is not an integer");
        }
        if (grade < 0 || grade > 2) {
            throw ParseError(source, line_no, "grade must be 0, 1 or 2, got " + grade_text);
        }
        try {
            qrels.add(query_id, thread_id, grade);
        } catch (DataError const& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
    return qrels;
}

void write_qrels(std::ostream& out, Qrels const& qrels) {
    for (auto const& query_id : qrels.query_ids()) {
        for (auto const& [thread_id, grade] : qrels.judgments(query_id)) {
            out << query_id << " 0 " << thread_id << ' ' << grade << '\n';
        }
    }
}

std::vector<Thread> load_corpus(std::string const& path) {
    return load_file<std::vector<Thread>>(path, &parse_corpus);
}

std::vector<Query> load_queries(std::string const& path) {
    return load_file<std::vector<Query>>(path, &parse_queries);
}

Qrels load_qrels(std::string const& path) {
    return load_file<Qrels>(path, &parse_qrels);
}

}  // namespace threadrank
