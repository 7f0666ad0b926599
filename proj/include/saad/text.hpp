#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace saad::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
// Collapses every run of whitespace into one space and trims both ends.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

bool is_word_char(char c) noexcept;

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;
std::string hex64(std::uint64_t v);

// Round half away from zero to `decimals` places.
double round_half_away(double x, int decimals);
// Fixed-point rendering after round_half_away, e.g. format_fixed(21.5197, 2) == "21.52".
std::string format_fixed(double x, int decimals);

}  // namespace saad::text
