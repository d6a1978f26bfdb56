#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adprompt::text {

// Replaces every invalid UTF-8 sequence with U+FFFD. `replaced` receives the
// number of substitutions when non-null.
std::string sanitize_utf8(std::string_view input, std::size_t* replaced = nullptr);

// True for code points that belong to words: ASCII letters and digits and
// non-ASCII letters. Punctuation, symbols, and whitespace return false.
bool is_word_codepoint(char32_t cp);

// Lowercases ASCII and Latin-1 capitals.
char32_t to_lower(char32_t cp);

// Keeps only word code points (lowercased). Input must be valid UTF-8.
std::string keep_word_chars_lower(std::string_view token);

std::vector<std::string> split_whitespace(std::string_view s);
std::string join(std::span<const std::string> parts, std::string_view sep = " ");
std::string_view trim(std::string_view s);
std::string ascii_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF. Blank lines
// are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view csv);
std::string csv_field(std::string_view value);  // quotes when needed

std::string read_file(const std::filesystem::path& path);
// Writes via a temporary sibling and rename so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace adprompt::text
