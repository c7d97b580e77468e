#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace threadrank {

/// Malformed or inconsistent input data (corpus, queries, qrels, runs, index files).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A located failure while parsing a line-oriented input.
class ParseError : public DataError {
  public:
    ParseError(std::string const& source, std::size_t line, std::string const& what)
        : DataError(source + ":" + std::to_string(line) + ": " + what), m_line(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line;
};

/// Index file with an unknown magic or version.
class VersionError : public DataError {
  public:
    using DataError::DataError;
};

/// Index file that is truncated or fails its checksum.
class IntegrityError : public DataError {
  public:
    using DataError::DataError;
};

}  // namespace threadrank
