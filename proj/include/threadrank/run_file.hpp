#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "threadrank/ranking.hpp"

namespace threadrank {

/// Per-query thread rankings, keyed by query id.
using Run = std::map<std::string, std::vector<RankedThread>>;

void add_ranking(Run& run, ThreadRanking ranking);

/// TREC run format: `query_id Q0 thread_id rank score tag`, scores with six decimals.
/// Each header line is written as a `# ` comment before the records.
void write_run(std::ostream& out, Run const& run, std::string const& tag,
               std::vector<std::string> const& header = {});

/// Reads a TREC run; `#` comment lines are skipped and entries are ordered by rank.
[[nodiscard]] Run parse_run(std::istream& in, std::string const& source = "run");
[[nodiscard]] Run load_run(std::string const& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(std::filesystem::path const& path, std::string const& contents);

}  // namespace threadrank
