#pragma once

// Chinese-specific features: pinyin edit distance (feature 10) and the
// normalized count of common radicals (feature 11).

#include <optional>
#include <string>
#include <vector>

#include "medsyn/core.hpp"
#include "medsyn/resources.hpp"

namespace medsyn::zh {

struct PinyinSequence {
  std::vector<std::string> syllables;
  double coverage = 0.0;  // fraction of characters found in the table
};

PinyinSequence pinyin_sequence(const Term& t, const PinyinTable& table);

/// Syllables joined with this separator before the character-level edit
/// distance, so "xian" and "xi"+"an" stay distinct.
inline constexpr char kSyllableSeparator = '-';

std::string joined_pinyin(const PinyinSequence& seq);

/// nullopt unless both terms are fully covered by the table.
std::optional<double> pinyin_edit_distance(const Term& a, const Term& b, const PinyinTable& table);

/// |radicals(a) ∩ radicals(b)| (as multisets) / longer character count.
/// nullopt when either term has no character in the table.
std::optional<double> common_radicals(const Term& a, const Term& b, const RadicalTable& table);

}  // namespace medsyn::zh
