#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace threadrank {

/// Lowercases and splits on every non-alphanumeric byte. Empty tokens are dropped.
/// Bytes outside ASCII count as separators.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

/// Porter stemmer, following Martin Porter's reference C implementation.
/// Expects a lowercase token; tokens of length <= 2 are returned unchanged.
[[nodiscard]] std::string porter_stem(std::string_view token);

/// tokenize followed by porter_stem on every token. No stopword removal.
[[nodiscard]] std::vector<std::string> analyze(std::string_view text);

}  // namespace threadrank
