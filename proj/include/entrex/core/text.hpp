#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace entrex {

// Decodes the UTF-8 sequence starting at s[pos]. Advances pos past the
// sequence. Invalid bytes decode as U+FFFD and advance by one byte.
uint32_t utf8_next(std::string_view s, size_t& pos);

// Appends the UTF-8 encoding of cp to out.
void utf8_append(std::string& out, uint32_t cp);

// ASCII + Latin-1 lowercasing; other codepoints pass through.
uint32_t lower_codepoint(uint32_t cp);

// Lowercases a UTF-8 string codepoint-wise.
std::string lower_utf8(std::string_view s);

// Decodes a UTF-8 string into codepoints.
std::vector<uint32_t> to_codepoints(std::string_view s);

// Edit distance over codepoint sequences.
size_t levenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);

// Shortest round-trip decimal form of a double; stable across runs, used
// everywhere a float lands in an artifact file.
std::string format_double(double v);

}  // namespace entrex
