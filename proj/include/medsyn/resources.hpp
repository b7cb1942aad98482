#pragma once

// Loaders for the labelled dataset and the lookup tables, and the
// stratified train/test split.
//
// File formats (all UTF-8, LF or CRLF line endings):
//   dataset     term_a \t term_b \t label(0|1) \t trans_a \t trans_b
//               translations are "||"-joined, empty allowed
//   embeddings  "count dimension" header, then "token v1 ... vd"
//   pinyin      char \t syllable
//   radicals    char \t radical
//   lexicon     term \t t1||t2||...

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "medsyn/core.hpp"

namespace medsyn {

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledPair> pairs);

  const std::vector<LabeledPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::size_t positive_count() const noexcept { return positives_; }
  std::size_t negative_count() const noexcept { return negatives_; }

  std::vector<Label> labels() const;

  /// FNV-1a 64 over the canonical TSV serialization, as 16 hex digits.
  std::string fingerprint() const;

 private:
  std::vector<LabeledPair> pairs_;
  std::size_t positives_ = 0;
  std::size_t negatives_ = 0;
};

Dataset load_dataset(std::istream& in);
void save_dataset(const Dataset& d, std::ostream& out);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws on a duplicate token, a wrong length or a non-finite component.
  void add(std::string token, std::vector<double> vector);

  /// nullptr when the token is absent.
  const std::vector<double>* find(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

EmbeddingTable load_embeddings(std::istream& in);
void save_embeddings(const EmbeddingTable& table, std::span<const std::string> order,
                     std::ostream& out);

/// One tone-stripped syllable per character.
class PinyinTable {
 public:
  void add(char32_t ch, std::string syllable);
  const std::string* find(char32_t ch) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Every (character, syllable) entry, sorted by character.
  std::vector<std::pair<char32_t, std::string>> entries() const;

 private:
  std::unordered_map<char32_t, std::string> entries_;
};

class RadicalTable {
 public:
  void add(char32_t ch, char32_t radical);
  std::optional<char32_t> find(char32_t ch) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Every (character, radical) entry, sorted by character.
  std::vector<std::pair<char32_t, char32_t>> entries() const;

 private:
  std::unordered_map<char32_t, char32_t> entries_;
};

class TranslationLexicon {
 public:
  void add(std::string term, std::vector<std::string> translations);
  /// nullptr when the term has no entry.
  const std::vector<std::string>* find(std::string_view term) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

PinyinTable load_pinyin_table(std::istream& in);
RadicalTable load_radical_table(std::istream& in);
TranslationLexicon load_translation_lexicon(std::istream& in);

/// Exact rational train fraction, default 2/3.
struct Fraction {
  std::uint64_t numerator = 2;
  std::uint64_t denominator = 3;

  /// floor(numerator/denominator * n), computed exactly.
  std::size_t floor_of(std::size_t n) const;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }

  /// Accepts "2/3" or a decimal such as "0.5".
  static Fraction parse(std::string_view text);
  std::string to_string() const;
};

struct SplitConfig {
  Fraction train_fraction;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

/// Per-class shuffle, then floor(fraction * class size) of each class to
/// train and the remainder to test. Deterministic in the seed.
TrainTestSplit split_train_test(const Dataset& d, const SplitConfig& cfg);

}  // namespace medsyn
