#pragma once

// Edit-distance features (4, 5) and the English morphological features
// (6 duplicate word, 7 subsequence, 8 first characters, 9 abbreviation).
// The set-valued features return nullopt when either translation set is
// empty, and fire when any cross pair of translations satisfies the test.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace medsyn::strfeat {

enum class Granularity { Character, Word };

/// A string viewed either as code points or as lowercase word tokens.
class SymbolSequence {
 public:
  static SymbolSequence characters(std::string_view utf8);
  static SymbolSequence words(std::string_view text);

  Granularity granularity() const noexcept;
  std::size_t size() const noexcept;

  const std::u32string& code_points() const { return std::get<std::u32string>(symbols_); }
  const std::vector<std::string>& tokens() const { return std::get<std::vector<std::string>>(symbols_); }

 private:
  explicit SymbolSequence(std::variant<std::u32string, std::vector<std::string>> s)
      : symbols_(std::move(s)) {}

  std::variant<std::u32string, std::vector<std::string>> symbols_;
};

/// Unit-cost Levenshtein distance over any two random-access ranges.
template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[b.size()];
}

/// Throws on mismatched granularity.
std::size_t edit_distance(const SymbolSequence& a, const SymbolSequence& b);

/// edit_distance / longer length, in [0,1]. Throws when both are empty.
double relative_edit_distance(const SymbolSequence& a, const SymbolSequence& b);

/// Character-granularity convenience for UTF-8 strings.
double relative_edit_distance(std::string_view a, std::string_view b);

enum class Aggregation { Max, Min };

std::string_view to_string(Aggregation agg);
Aggregation parse_aggregation(std::string_view text);

using EnList = std::span<const std::string>;

/// Max (or Min) of the relative edit distance over all cross pairs.
std::optional<double> set_edit_distance(EnList a, EnList b, Aggregation agg = Aggregation::Max);

std::optional<bool> duplicate_word(EnList a, EnList b);
std::optional<bool> subsequence(EnList a, EnList b);
std::optional<bool> first_characters_match(EnList a, EnList b);
std::optional<bool> abbreviation_match(EnList a, EnList b);

/// Single-string tests used by the set features.
bool is_subsequence(std::u32string_view needle, std::u32string_view hay);
std::u32string token_initials(std::string_view text, bool skip_stopwords = false);
std::u32string uppercase_letters(std::string_view text);
bool abbreviates(std::string_view a, std::string_view b);

}  // namespace medsyn::strfeat
