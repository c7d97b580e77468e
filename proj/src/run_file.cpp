#include "threadrank/run_file.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "threadrank/error.hpp"

namespace threadrank {

void add_ranking(Run& run, ThreadRanking ranking) {
    run[ranking.query_id] = std::move(ranking.threads);
}

void write_run(std::ostream& out, Run const& run, std::string const& tag, std::vector<std::string> const& header) {
    for (auto const& line : header) {
        out << "# " << line << '\n';
    }
    char score[64];
    for (auto const& [query_id, threads] : run) {
        for (std::size_t i = 0; i < threads.size(); ++i) {
            std::snprintf(score, sizeof(score), "%.6f", threads[i].score);
            out << query_id << " Q0 " << threads[i].thread_id << ' ' << (i + 1) << ' ' << score << ' ' << tag
                << '\n';
        }
    }
}

Run parse_run(std::istream& in, std::string const& source) {
    struct Record {
        std::size_t rank;
        RankedThread thread;
    };
    std::map<std::string, std::vector<Record>> records;
    std::map<std::string, std::set<std::string>> seen;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        std::string query_id, q0, thread_id, rank_text, score_text, tag;
        if (!(fields >> query_id >> q0 >> thread_id >> rank_text >> score_text >> tag)) {
            throw ParseError(source, line_no, "expected 'query_id Q0 thread_id rank score tag'");
        }
        Record record{};
        try {
            std::size_t used = 0;
            auto rank = std::stoll(rank_text, &used);
            if (used != rank_text.size() || rank < 0) throw std::invalid_argument(rank_text);
            record.rank = static_cast<std::size_t>(rank);
            record.thread.score = std::stod(score_text, &used);
            if (used != score_text.size()) throw std::invalid_argument(score_text);
        } catch (std::logic_error const&) {
            throw ParseError(source, line_no, "invalid rank or score");
        }
        if (!seen[query_id].insert(thread_id).second) {
            throw ParseError(source, line_no, "thread '" + thread_id + "' listed twice for query '" + query_id + "'");
        }
        record.thread.thread_id = thread_id;
        records[query_id].push_back(std::move(record));
    }

    Run run;
    for (auto& [query_id, list] : records) {
        std::stable_sort(list.begin(), list.end(), [](Record const& a, Record const& b) { return a.rank < b.rank; });
        auto& out = run[query_id];
        out.reserve(list.size());
        for (auto& record : list) {
            out.push_back(std::move(record.thread));
        }
    }
    return run;
}

Run load_run(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    return parse_run(in, path);
}

void write_file_atomic(std::filesystem::path const& path, std::string const& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << contents;
        out.flush();
        if (!out) {
            throw DataError("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace threadrank
