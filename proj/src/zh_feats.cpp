#include "medsyn/zh_feats.hpp"

#include <algorithm>
#include <map>

#include "medsyn/string_feats.hpp"
#include "medsyn/text.hpp"

namespace medsyn::zh {

PinyinSequence pinyin_sequence(const Term& t, const PinyinTable& table) {
  const auto chars = text::decode_utf8(t.surface());
  PinyinSequence seq;
  for (char32_t ch : chars) {
    if (const auto* syllable = table.find(ch)) seq.syllables.push_back(*syllable);
  }
  seq.coverage = chars.empty() ? 0.0
                               : static_cast<double>(seq.syllables.size()) /
                                     static_cast<double>(chars.size());
  return seq;
}

std::string joined_pinyin(const PinyinSequence& seq) {
  std::string out;
  for (const auto& s : seq.syllables) {
    if (!out.empty()) out += kSyllableSeparator;
    out += s;
  }
  return out;
}

std::optional<double> pinyin_edit_distance(const Term& a, const Term& b, const PinyinTable& table) {
  const auto pa = pinyin_sequence(a, table);
  const auto pb = pinyin_sequence(b, table);
  if (pa.coverage < 1.0 || pb.coverage < 1.0) return std::nullopt;
  return strfeat::relative_edit_distance(joined_pinyin(pa), joined_pinyin(pb));
}

std::optional<double> common_radicals(const Term& a, const Term& b, const RadicalTable& table) {
  const auto ca = text::decode_utf8(a.surface());
  const auto cb = text::decode_utf8(b.surface());
  std::map<char32_t, int> left;
  std::size_t covered_a = 0;
  for (char32_t ch : ca) {
    if (const auto r = table.find(ch)) {
      ++left[*r];
      ++covered_a;
    }
  }
  std::size_t common = 0, covered_b = 0;
  for (char32_t ch : cb) {
    if (const auto r = table.find(ch)) {
      ++covered_b;
      auto it = left.find(*r);
      if (it != left.end() && it->second > 0) {
        --it->second;
        ++common;
      }
    }
  }
  if (covered_a == 0 || covered_b == 0) return std::nullopt;
  return static_cast<double>(common) / static_cast<double>(std::max(ca.size(), cb.size()));
}

}  // namespace medsyn::zh
