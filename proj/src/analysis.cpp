#include "threadrank/analysis.hpp"

#include <cctype>

namespace threadrank {

namespace {

bool is_token_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::isalnum(u) != 0;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_token_char(c)) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::vector<std::string> analyze(std::string_view text) {
    auto tokens = tokenize(text);
    for (auto& token : tokens) {
        token = porter_stem(token);
    }
    return tokens;
}

}  // namespace threadrank
