#include "medsyn/resources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "medsyn/error.hpp"
#include "medsyn/random.hpp"
#include "medsyn/text.hpp"

namespace medsyn {

namespace {

constexpr std::string_view kJoin = "||";

std::vector<std::string> parse_translations(std::string_view field) {
  if (text::trim(field).empty()) return {};
  std::vector<std::string> out;
  for (auto& t : text::split(field, kJoin)) {
    auto trimmed = std::string(text::trim(t));
    if (!trimmed.empty()) out.push_back(std::move(trimmed));
  }
  return out;
}

std::string join_translations(const std::vector<std::string>& ts) {
  std::string out;
  for (const auto& t : ts) {
    if (!out.empty()) out += kJoin;
    out += t;
  }
  return out;
}

char32_t single_char(std::string_view field, std::size_t line, const char* what) {
  std::u32string cps;
  try {
    cps = text::decode_utf8(field);
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  if (cps.size() != 1) {
    throw ParseError(line, std::string(what) + " must be a single character, got '" +
                               std::string(field) + "'");
  }
  return cps[0];
}

// Reads "key \t value" rows, skipping blank lines.
template <typename RowFn>
void for_each_two_column_row(std::istream& in, RowFn&& fn) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::chomp(raw);
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, "\t");
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected 2 tab-separated columns, got " + std::to_string(fields.size()));
    }
    if (text::trim(fields[1]).empty()) throw ParseError(line_no, "empty value");
    fn(line_no, fields[0], std::string(text::trim(fields[1])));
  }
}

}  // namespace

Dataset::Dataset(std::vector<LabeledPair> pairs) : pairs_(std::move(pairs)) {
  for (const auto& p : pairs_) {
    (p.label == Label::Positive ? positives_ : negatives_)++;
  }
}

std::vector<Label> Dataset::labels() const {
  std::vector<Label> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(p.label);
  return out;
}

std::string Dataset::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& p : pairs_) {
    mix(p.a.surface());
    mix("\t");
    mix(p.b.surface());
    mix(p.label == Label::Positive ? "\t1\t" : "\t0\t");
    mix(join_translations(p.a.translations()));
    mix("\t");
    mix(join_translations(p.b.translations()));
    mix("\n");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

Dataset load_dataset(std::istream& in) {
  std::vector<LabeledPair> pairs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::chomp(raw);
    if (text::trim(line).empty()) continue;
    const auto f = text::split(line, "\t");
    if (f.size() != 5) {
      throw ParseError(line_no, "expected 5 tab-separated columns, got " + std::to_string(f.size()));
    }
    Label label;
    if (f[2] == "1") {
      label = Label::Positive;
    } else if (f[2] == "0") {
      label = Label::Negative;
    } else {
      throw ParseError(line_no, "label must be 0 or 1, got '" + f[2] + "'");
    }
    try {
      pairs.push_back(LabeledPair{Term(f[0], parse_translations(f[3])),
                                  Term(f[1], parse_translations(f[4])), label});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return Dataset(std::move(pairs));
}

void save_dataset(const Dataset& d, std::ostream& out) {
  for (const auto& p : d.pairs()) {
    out << p.a.surface() << '\t' << p.b.surface() << '\t'
        << (p.label == Label::Positive ? '1' : '0') << '\t'
        << join_translations(p.a.translations()) << '\t'
        << join_translations(p.b.translations()) << '\n';
  }
}

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw Error("embedding dimension must be positive");
}

void EmbeddingTable::add(std::string token, std::vector<double> vector) {
  if (vector.size() != dimension_) {
    throw Error("vector for '" + token + "' has " + std::to_string(vector.size()) +
                " components, expected " + std::to_string(dimension_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) throw Error("non-finite component in vector for '" + token + "'");
  }
  const auto [it, inserted] = entries_.try_emplace(std::move(token), std::move(vector));
  if (!inserted) throw Error("duplicate embedding token '" + it->first + "'");
}

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
  const auto it = entries_.find(std::string(token));
  return it == entries_.end() ? nullptr : &it->second;
}

static double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

static std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

EmbeddingTable load_embeddings(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) throw ParseError(1, "missing 'count dimension' header");
  ++line_no;
  const auto header = text::split_whitespace(text::chomp(raw));
  if (header.size() != 2) throw ParseError(line_no, "header must be 'count dimension'");
  const std::size_t count = parse_count(header[0], line_no);
  const std::size_t dim = parse_count(header[1], line_no);
  if (dim == 0) throw ParseError(line_no, "dimension must be positive");

  EmbeddingTable table(dim);
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fields = text::split_whitespace(text::chomp(raw));
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw ParseError(line_no, "expected token plus " + std::to_string(dim) + " components, got " +
                                    std::to_string(fields.size() - 1));
    }
    std::vector<double> v;
    v.reserve(dim);
    for (std::size_t k = 1; k < fields.size(); ++k) v.push_back(parse_double(fields[k], line_no));
    try {
      table.add(fields[0], std::move(v));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (table.size() != count) {
    throw ParseError(line_no, "header declares " + std::to_string(count) + " entries, found " +
                                  std::to_string(table.size()));
  }
  return table;
}

void save_embeddings(const EmbeddingTable& table, std::span<const std::string> order,
                     std::ostream& out) {
  out << order.size() << ' ' << table.dimension() << '\n';
  char buf[64];
  for (const auto& token : order) {
    const auto* v = table.find(token);
    if (v == nullptr) throw Error("save_embeddings: unknown token '" + token + "'");
    out << token;
    for (double x : *v) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

static bool valid_syllable(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return (c >= 'a' && c <= 'z') || c == '\''; });
}

void PinyinTable::add(char32_t ch, std::string syllable) {
  if (!valid_syllable(syllable)) throw Error("invalid pinyin syllable '" + syllable + "'");
  if (!entries_.try_emplace(ch, std::move(syllable)).second) {
    throw Error("duplicate pinyin entry for '" + text::encode_utf8(ch) + "'");
  }
}

const std::string* PinyinTable::find(char32_t ch) const {
  const auto it = entries_.find(ch);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::pair<char32_t, std::string>> PinyinTable::entries() const {
  std::vector<std::pair<char32_t, std::string>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

void RadicalTable::add(char32_t ch, char32_t radical) {
  if (!entries_.try_emplace(ch, radical).second) {
    throw Error("duplicate radical entry for '" + text::encode_utf8(ch) + "'");
  }
}

std::optional<char32_t> RadicalTable::find(char32_t ch) const {
  const auto it = entries_.find(ch);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<char32_t, char32_t>> RadicalTable::entries() const {
  std::vector<std::pair<char32_t, char32_t>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

void TranslationLexicon::add(std::string term, std::vector<std::string> translations) {
  translations = dedupe_preserving_order(std::move(translations));
  if (translations.empty()) throw Error("empty translation list for '" + term + "'");
  const auto [it, inserted] = entries_.try_emplace(std::move(term), std::move(translations));
  if (!inserted) throw Error("duplicate lexicon entry for '" + it->first + "'");
}

const std::vector<std::string>* TranslationLexicon::find(std::string_view term) const {
  const auto it = entries_.find(std::string(term));
  return it == entries_.end() ? nullptr : &it->second;
}

PinyinTable load_pinyin_table(std::istream& in) {
  PinyinTable table;
  for_each_two_column_row(in, [&](std::size_t line, std::string_view key, std::string value) {
    const char32_t ch = single_char(key, line, "pinyin key");
    try {
      table.add(ch, text::ascii_lower(value));
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  });
  return table;
}

RadicalTable load_radical_table(std::istream& in) {
  RadicalTable table;
  for_each_two_column_row(in, [&](std::size_t line, std::string_view key, std::string value) {
    const char32_t ch = single_char(key, line, "radical key");
    const char32_t radical = single_char(value, line, "radical");
    try {
      table.add(ch, radical);
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  });
  return table;
}

TranslationLexicon load_translation_lexicon(std::istream& in) {
  TranslationLexicon lexicon;
  for_each_two_column_row(in, [&](std::size_t line, std::string_view key, std::string value) {
    const auto term = std::string(text::trim(key));
    if (term.empty()) throw ParseError(line, "empty term");
    try {
      lexicon.add(term, parse_translations(value));
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  });
  return lexicon;
}

std::size_t Fraction::floor_of(std::size_t n) const {
  const unsigned __int128 prod = static_cast<unsigned __int128>(n) * numerator;
  return static_cast<std::size_t>(prod / denominator);
}

Fraction Fraction::parse(std::string_view text) {
  const auto t = text::trim(text);
  auto fail = [&]() -> Error { return Error("bad fraction '" + std::string(text) + "'"); };
  auto parse_u = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw fail();
    return v;
  };
  Fraction f;
  if (const auto slash = t.find('/'); slash != std::string_view::npos) {
    f.numerator = parse_u(t.substr(0, slash));
    f.denominator = parse_u(t.substr(slash + 1));
  } else if (const auto dot = t.find('.'); dot != std::string_view::npos) {
    const auto whole = t.substr(0, dot);
    const auto frac = t.substr(dot + 1);
    if (frac.empty() || frac.size() > 18) throw fail();
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    f.numerator = (whole.empty() ? 0 : parse_u(whole)) * den + parse_u(frac);
    f.denominator = den;
  } else {
    f.numerator = parse_u(t);
    f.denominator = 1;
  }
  if (f.denominator == 0 || f.numerator == 0 || f.numerator >= f.denominator) {
    throw Error("train fraction must lie strictly between 0 and 1, got '" + std::string(text) + "'");
  }
  return f;
}

std::string Fraction::to_string() const {
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

TrainTestSplit split_train_test(const Dataset& d, const SplitConfig& cfg) {
  const auto& frac = cfg.train_fraction;
  if (frac.denominator == 0 || frac.numerator == 0 || frac.numerator >= frac.denominator) {
    throw Error("train fraction must lie strictly between 0 and 1");
  }
  Rng rng(cfg.seed);
  std::vector<bool> to_train(d.size(), false);

  auto draw = [&](std::vector<std::size_t> idx) {
    shuffle(std::span<std::size_t>(idx), rng);
    const std::size_t k = frac.floor_of(idx.size());
    for (std::size_t i = 0; i < k; ++i) to_train[idx[i]] = true;
  };

  if (cfg.stratified) {
    if (d.positive_count() == 0 || d.negative_count() == 0) {
      throw Error("stratified split needs both classes (positives=" +
                  std::to_string(d.positive_count()) + ", negatives=" +
                  std::to_string(d.negative_count()) + ")");
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < d.size(); ++i) {
      (d.pairs()[i].label == Label::Positive ? pos : neg).push_back(i);
    }
    draw(std::move(pos));
    draw(std::move(neg));
  } else {
    std::vector<std::size_t> all(d.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    draw(std::move(all));
  }

  std::vector<LabeledPair> train, test;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (to_train[i] ? train : test).push_back(d.pairs()[i]);
  }
  return {Dataset(std::move(train)), Dataset(std::move(test))};
}

}  // namespace medsyn
