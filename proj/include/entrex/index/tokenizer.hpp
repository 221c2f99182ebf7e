#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace entrex::index {

// Lowercases and splits on every non-alphanumeric codepoint. ASCII digits
// and letters plus all codepoints >= U+0080 count as word characters;
// Latin-1 letters are case-folded.
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace entrex::index
