#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace groundnav {

/// Lowercases and splits on every character that is not an ASCII letter or
/// digit. "the North-East exit." -> {"the", "north", "east", "exit"}.
std::vector<std::string> split_words(std::string_view text);

/// Joins words with single spaces.
std::string join_words(const std::vector<std::string>& words, std::size_t begin,
                       std::size_t end);
std::string join_words(const std::vector<std::string>& words);

}  // namespace groundnav
