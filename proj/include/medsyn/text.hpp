#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the loaders and the string features.

namespace medsyn::text {

/// Decodes UTF-8 into code points. Throws medsyn::Error on malformed input.
std::u32string decode_utf8(std::string_view utf8);

std::string encode_utf8(char32_t cp);
std::string encode_utf8(std::u32string_view cps);

bool is_valid_utf8(std::string_view utf8);

/// Splits on ASCII whitespace, dropping empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

/// Splits on an exact delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view s, std::string_view delim);

std::string ascii_lower(std::string_view s);
char32_t ascii_lower(char32_t cp);

/// Unicode uppercase letter test (Lu). Falls back to ASCII when no UTF-8
/// locale is available.
bool is_upper(char32_t cp);

std::string_view trim(std::string_view s);

/// Strips a trailing '\r' so CRLF files parse like LF files.
std::string_view chomp(std::string_view line);

}  // namespace medsyn::text
