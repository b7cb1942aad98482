#include "medsyn/string_feats.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "medsyn/error.hpp"
#include "medsyn/text.hpp"

namespace medsyn::strfeat {

SymbolSequence SymbolSequence::characters(std::string_view utf8) {
  return SymbolSequence(text::decode_utf8(utf8));
}

SymbolSequence SymbolSequence::words(std::string_view text) {
  auto tokens = text::split_whitespace(text);
  for (auto& t : tokens) t = text::ascii_lower(t);
  return SymbolSequence(std::move(tokens));
}

Granularity SymbolSequence::granularity() const noexcept {
  return std::holds_alternative<std::u32string>(symbols_) ? Granularity::Character
                                                          : Granularity::Word;
}

std::size_t SymbolSequence::size() const noexcept {
  return std::visit([](const auto& s) { return s.size(); }, symbols_);
}

std::size_t edit_distance(const SymbolSequence& a, const SymbolSequence& b) {
  if (a.granularity() != b.granularity()) {
    throw Error("edit distance between sequences of different granularity");
  }
  if (a.granularity() == Granularity::Character) {
    return levenshtein<char32_t>(a.code_points(), b.code_points());
  }
  return levenshtein<std::string>(a.tokens(), b.tokens());
}

double relative_edit_distance(const SymbolSequence& a, const SymbolSequence& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t d = edit_distance(a, b);
  if (longest == 0) throw Error("relative edit distance of two empty sequences");
  return static_cast<double>(d) / static_cast<double>(longest);
}

double relative_edit_distance(std::string_view a, std::string_view b) {
  return relative_edit_distance(SymbolSequence::characters(a), SymbolSequence::characters(b));
}

std::string_view to_string(Aggregation agg) { return agg == Aggregation::Max ? "max" : "min"; }

Aggregation parse_aggregation(std::string_view t) {
  if (t == "max") return Aggregation::Max;
  if (t == "min") return Aggregation::Min;
  throw Error("aggregation must be 'max' or 'min', got '" + std::string(t) + "'");
}

namespace {

template <typename Pred>
std::optional<bool> any_cross_pair(EnList a, EnList b, Pred&& pred) {
  if (a.empty() || b.empty()) return std::nullopt;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (pred(x, y)) return true;
    }
  }
  return false;
}

std::u32string folded(std::string_view s) {
  auto cps = text::decode_utf8(s);
  for (auto& c : cps) c = text::ascii_lower(c);
  return cps;
}

bool is_stopword(std::string_view lower_token) {
  static constexpr std::array<std::string_view, 4> kStop = {"of", "the", "and", "for"};
  return std::find(kStop.begin(), kStop.end(), lower_token) != kStop.end();
}

}  // namespace

std::optional<double> set_edit_distance(EnList a, EnList b, Aggregation agg) {
  if (a.empty() || b.empty()) return std::nullopt;
  std::optional<double> best;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x.empty() && y.empty()) continue;
      const double d = relative_edit_distance(x, y);
      if (!best) best = d;
      else best = agg == Aggregation::Max ? std::max(*best, d) : std::min(*best, d);
    }
  }
  return best;
}

std::optional<bool> duplicate_word(EnList a, EnList b) {
  if (a.empty() || b.empty()) return std::nullopt;
  std::unordered_set<std::string> left;
  for (const auto& t : a) {
    for (auto& tok : text::split_whitespace(t)) left.insert(text::ascii_lower(tok));
  }
  for (const auto& t : b) {
    for (const auto& tok : text::split_whitespace(t)) {
      if (left.contains(text::ascii_lower(tok))) return true;
    }
  }
  return false;
}

bool is_subsequence(std::u32string_view needle, std::u32string_view hay) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < hay.size() && j < needle.size(); ++i) {
    if (hay[i] == needle[j]) ++j;
  }
  return j == needle.size();
}

std::optional<bool> subsequence(EnList a, EnList b) {
  return any_cross_pair(a, b, [](const std::string& x, const std::string& y) {
    const auto fx = folded(x);
    const auto fy = folded(y);
    return is_subsequence(fx, fy) || is_subsequence(fy, fx);
  });
}

std::u32string token_initials(std::string_view s, bool skip_stopwords) {
  std::u32string out;
  for (const auto& tok : text::split_whitespace(s)) {
    if (skip_stopwords && is_stopword(text::ascii_lower(tok))) continue;
    const auto cps = text::decode_utf8(tok);
    out.push_back(text::ascii_lower(cps.front()));
  }
  return out;
}

std::optional<bool> first_characters_match(EnList a, EnList b) {
  return any_cross_pair(a, b, [](const std::string& x, const std::string& y) {
    const auto ix = token_initials(x);
    return !ix.empty() && ix == token_initials(y);
  });
}

std::u32string uppercase_letters(std::string_view s) {
  std::u32string out;
  for (char32_t c : text::decode_utf8(s)) {
    if (text::is_upper(c)) out.push_back(c);
  }
  return out;
}

// True when a's capitals spell b, either as b's capitals or as b's token
// initials (with or without stopwords).
bool abbreviates(std::string_view a, std::string_view b) {
  auto caps = uppercase_letters(a);
  if (caps.empty()) return false;
  if (caps == uppercase_letters(b)) return true;
  for (auto& c : caps) c = text::ascii_lower(c);
  return caps == token_initials(b) || caps == token_initials(b, true);
}

std::optional<bool> abbreviation_match(EnList a, EnList b) {
  return any_cross_pair(a, b, [](const std::string& x, const std::string& y) {
    return abbreviates(x, y) || abbreviates(y, x);
  });
}

}  // namespace medsyn::strfeat
