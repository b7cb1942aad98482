#include "medsyn/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "medsyn/error.hpp"
#include "medsyn/random.hpp"
#include "medsyn/text.hpp"

namespace medsyn::synth {

namespace {

constexpr std::u32string_view kBodyPrefixes = U"肝胃肺";
constexpr std::u32string_view kDiseaseSuffixes = U"病炎癌";
constexpr std::array<std::string_view, 12> kHeads = {
    "Syndrome", "Disease", "Fever", "Infection", "Tumor", "Lesion",
    "Pain",     "Cyst",    "Ulcer", "Mania",     "Rash",  "Allergy"};

enum class Perturbation { Homophone, Radical, Edit };

struct Concept {
  std::u32string base;
  std::u32string variant;
  std::vector<std::string> base_translations;
  std::vector<std::string> variant_translations;
  std::vector<double> zh_center;
  std::vector<double> en_center;
  std::vector<std::string> modifiers;
};

class Generator {
 public:
  Generator(const SyntheticConfig& cfg, const PinyinTable& pinyin, const RadicalTable& radicals)
      : cfg_(cfg), rng_(cfg.seed) {
    for (const auto& [ch, radical] : radicals.entries()) {
      const auto* syllable = pinyin.find(ch);
      if (syllable == nullptr) continue;
      chars_.push_back(ch);
      by_syllable_[*syllable].push_back(ch);
      by_radical_[radical].push_back(ch);
      syllable_of_[ch] = *syllable;
      radical_of_[ch] = radical;
    }
    if (chars_.size() < 50) throw Error("synthetic generator needs at least 50 covered characters");
    for (char32_t c : kBodyPrefixes) {
      if (syllable_of_.contains(c)) prefixes_.push_back(c);
    }
    for (char32_t c : kDiseaseSuffixes) {
      if (syllable_of_.contains(c)) suffixes_.push_back(c);
    }
    // Characters absent from both tables, for terms the dictionaries miss.
    for (char32_t c = 0x9E00; c < 0x9F00 && rare_.size() < 100; ++c) {
      if (!syllable_of_.contains(c) && pinyin.find(c) == nullptr && !radicals.find(c)) {
        rare_.push_back(c);
      }
    }
  }

  SyntheticWorld run();

 private:
  char32_t any_char() { return chars_[uniform_below(rng_, chars_.size())]; }

  bool chance(double p) { return uniform_unit(rng_) < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform_below(rng_, v.size())];
  }

  std::u32string make_base();
  std::u32string perturb(const std::u32string& base);
  std::optional<char32_t> partner(char32_t ch, Perturbation kind);
  std::string make_word();
  std::vector<double> gaussian(std::size_t dim, double scale);

  const SyntheticConfig& cfg_;
  Rng rng_;
  std::vector<char32_t> chars_;
  std::vector<char32_t> prefixes_;
  std::vector<char32_t> suffixes_;
  std::vector<char32_t> rare_;
  std::map<std::string, std::vector<char32_t>> by_syllable_;
  std::map<char32_t, std::vector<char32_t>> by_radical_;
  std::map<char32_t, std::string> syllable_of_;
  std::map<char32_t, char32_t> radical_of_;
  std::unordered_set<std::u32string> used_surfaces_;
  std::unordered_set<std::string> used_words_;
};

std::u32string Generator::make_base() {
  while (true) {
    const std::size_t len = 3 + uniform_below(rng_, 2);
    std::u32string t;
    const bool prefix = !prefixes_.empty() && chance(0.6);
    const bool suffix = !suffixes_.empty() && chance(0.7);
    if (prefix) t.push_back(pick(prefixes_));
    while (t.size() + (suffix ? 1 : 0) < len) t.push_back(any_char());
    if (suffix) t.push_back(pick(suffixes_));
    if (!rare_.empty() && chance(0.3)) t[prefix ? 1 : 0] = pick(rare_);
    if (used_surfaces_.insert(t).second) return t;
  }
}

std::optional<char32_t> Generator::partner(char32_t ch, Perturbation kind) {
  if (!syllable_of_.contains(ch)) return std::nullopt;
  const auto& group = kind == Perturbation::Homophone ? by_syllable_.at(syllable_of_.at(ch))
                                                      : by_radical_.at(radical_of_.at(ch));
  if (group.size() < 2) return std::nullopt;
  while (true) {
    const char32_t other = pick(group);
    if (other != ch) return other;
  }
}

std::u32string Generator::perturb(const std::u32string& base) {
  while (true) {
    std::u32string out = base;
    const auto kind = static_cast<Perturbation>(uniform_below(rng_, 3));
    std::vector<std::size_t> positions(base.size());
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
    shuffle(std::span<std::size_t>(positions), rng_);
    if (kind == Perturbation::Edit) {
      out[positions[0]] = any_char();
    } else {
      const std::size_t wanted = 1 + uniform_below(rng_, base.size() - 1);
      std::size_t changed = 0;
      for (std::size_t pos : positions) {
        if (changed == wanted) break;
        if (const auto other = partner(base[pos], kind)) {
          out[pos] = *other;
          ++changed;
        }
      }
      if (changed == 0) out[positions[0]] = any_char();
    }
    if (out != base && used_surfaces_.insert(out).second) return out;
  }
}

std::string Generator::make_word() {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  while (true) {
    std::string w;
    const std::size_t syllables = 2 + uniform_below(rng_, 2);
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(kOnsets[uniform_below(rng_, kOnsets.size())]);
      w.push_back(kVowels[uniform_below(rng_, kVowels.size())]);
    }
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (used_words_.insert(w).second) return w;
  }
}

std::vector<double> Generator::gaussian(std::size_t dim, double scale) {
  std::vector<double> v(dim);
  for (double& x : v) x = scale * standard_normal(rng_);
  return v;
}

std::string initials(const std::string& name) {
  std::string out;
  for (const auto& tok : text::split_whitespace(name)) out.push_back(tok[0]);
  return out;
}

SyntheticWorld Generator::run() {
  const std::size_t n_concepts = std::max(cfg_.positives, cfg_.negatives);
  if (n_concepts < 2) throw Error("synthetic world needs at least 2 concepts");

  std::vector<Concept> concepts(n_concepts);
  std::vector<std::string> head_words(kHeads.begin(), kHeads.end());
  for (auto& c : concepts) {
    c.base = make_base();
    c.variant = perturb(c.base);
    c.zh_center = gaussian(cfg_.zh_dimension, 1.0);
    c.en_center = gaussian(cfg_.en_dimension, 1.0);
    for (int k = 0; k < 3; ++k) c.modifiers.push_back(make_word());

    const std::string head = std::string(kHeads[uniform_below(rng_, kHeads.size())]);
    const std::string canonical = chance(0.5) ? c.modifiers[0] + " " + head
                                              : c.modifiers[0] + " " + c.modifiers[1] + " " + head;
    const std::string synonym =
        c.modifiers[2] + " " + std::string(kHeads[uniform_below(rng_, kHeads.size())]);
    c.base_translations = {canonical};
    if (chance(0.8)) {
      const double r = uniform_unit(rng_);
      if (r < 0.5) {
        c.variant_translations = {canonical};
      } else if (r < 0.8) {
        c.variant_translations = {canonical + "s"};
      } else {
        c.variant_translations = {initials(canonical)};
        if (chance(0.5)) c.variant_translations.push_back(synonym);
      }
    } else {
      c.variant_translations = {synonym};
    }
  }

  SyntheticWorld world;
  world.zh_embeddings = std::make_shared<EmbeddingTable>(cfg_.zh_dimension);
  world.en_embeddings = std::make_shared<EmbeddingTable>(cfg_.en_dimension);
  world.lexicon = std::make_shared<TranslationLexicon>();

  // Translations: 15% only via the lexicon, 8% unavailable.
  auto place_translations = [&](const std::string& surface, const std::vector<std::string>& ts) {
    const double r = uniform_unit(rng_);
    if (r < 0.08) return std::vector<std::string>{};
    if (r < 0.23) {
      world.lexicon->add(surface, ts);
      world.lexicon_rows.emplace_back(surface, ts);
      return std::vector<std::string>{};
    }
    return ts;
  };

  std::vector<Term> bases, variants;
  for (auto& c : concepts) {
    const auto a = text::encode_utf8(c.base);
    const auto b = text::encode_utf8(c.variant);
    bases.emplace_back(a, place_translations(a, c.base_translations));
    variants.emplace_back(b, place_translations(b, c.variant_translations));
    world.vocabulary.push_back(a);
    world.vocabulary.push_back(b);

    // 10% of surfaces are out of vocabulary and fall back to characters.
    for (const auto& s : {a, b}) {
      if (chance(0.1)) continue;
      auto v = c.zh_center;
      const auto noise = gaussian(cfg_.zh_dimension, 1.0);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += noise[i];
      world.zh_embeddings->add(s, std::move(v));
      world.zh_tokens.push_back(s);
    }
    for (const auto& m : c.modifiers) {
      auto v = c.en_center;
      const auto noise = gaussian(cfg_.en_dimension, 0.8);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += noise[i];
      world.en_embeddings->add(m, std::move(v));
      world.en_tokens.push_back(m);
    }
  }
  for (char32_t ch : chars_) {
    const auto s = text::encode_utf8(ch);
    if (world.zh_embeddings->find(s) != nullptr) continue;
    world.zh_embeddings->add(s, gaussian(cfg_.zh_dimension, 1.0));
    world.zh_tokens.push_back(s);
  }
  for (const auto& h : head_words) {
    world.en_embeddings->add(h, gaussian(cfg_.en_dimension, 1.0));
    world.en_tokens.push_back(h);
  }

  // Negatives pair base i with the variant of a different concept.
  std::vector<std::size_t> partner(n_concepts);
  for (std::size_t i = 0; i < n_concepts; ++i) partner[i] = i;
  shuffle(std::span<std::size_t>(partner), rng_);
  for (std::size_t i = 0; i < n_concepts; ++i) {
    if (partner[i] == i) std::swap(partner[i], partner[(i + 1) % n_concepts]);
  }

  std::vector<LabeledPair> pairs;
  for (std::size_t i = 0; i < cfg_.positives; ++i) {
    pairs.push_back({bases[i], variants[i], Label::Positive});
  }
  for (std::size_t i = 0; i < cfg_.negatives; ++i) {
    pairs.push_back({bases[i], variants[partner[i]], Label::Negative});
  }
  shuffle(std::span<LabeledPair>(pairs), rng_);
  world.dataset = Dataset(std::move(pairs));

  // Corpus 12: concept terms co-occur; scattered mixed documents add noise.
  auto filler = [&]() { return std::string(kHeads[uniform_below(rng_, kHeads.size())]); };
  for (std::size_t i = 0; i < n_concepts; ++i) {
    const auto a = text::encode_utf8(concepts[i].base);
    const auto b = text::encode_utf8(concepts[i].variant);
    if (chance(0.8)) {
      const std::size_t together = 1 + uniform_below(rng_, 3);
      for (std::size_t k = 0; k < together; ++k) world.corpus12.push_back(a + " " + filler() + " " + b);
    }
    for (const auto& s : {a, b}) {
      const std::size_t alone = 1 + uniform_below(rng_, 3);
      for (std::size_t k = 0; k < alone; ++k) world.corpus12.push_back(filler() + " " + s);
    }
  }
  for (std::size_t k = 0; k < n_concepts / 2; ++k) {
    world.corpus12.push_back(pick(world.vocabulary) + " " + pick(world.vocabulary));
  }
  shuffle(std::span<std::string>(world.corpus12), rng_);

  // Corpus 13: documents of uniformly random terms, unrelated to labels.
  for (std::size_t k = 0; k < 5 * n_concepts; ++k) {
    const std::size_t terms = 2 + uniform_below(rng_, 4);
    std::string doc;
    for (std::size_t t = 0; t < terms; ++t) {
      if (!doc.empty()) doc += ' ';
      doc += pick(world.vocabulary);
    }
    world.corpus13.push_back(std::move(doc));
  }
  return world;
}

}  // namespace

ResourceBundle SyntheticWorld::bundle(std::shared_ptr<const PinyinTable> pinyin,
                                      std::shared_ptr<const RadicalTable> radicals, double log_m,
                                      strfeat::Aggregation eq5, double ngd_max) const {
  ResourceBundle b;
  b.zh_embeddings = zh_embeddings;
  b.en_embeddings = en_embeddings;
  b.pinyin = std::move(pinyin);
  b.radicals = std::move(radicals);
  b.lexicon = lexicon;
  b.provider12 = std::make_shared<web::CorpusProvider>(
      std::make_shared<const web::CorpusIndex>(web::build_corpus_index(corpus12, vocabulary)), log_m);
  b.provider13 = std::make_shared<web::CorpusProvider>(
      std::make_shared<const web::CorpusIndex>(web::build_corpus_index(corpus13, vocabulary)), log_m);
  b.eq5_aggregation = eq5;
  b.ngd_max = ngd_max;
  return b;
}

SyntheticWorld generate(const SyntheticConfig& cfg, const PinyinTable& pinyin,
                        const RadicalTable& radicals) {
  return Generator(cfg, pinyin, radicals).run();
}

void write_world(const SyntheticWorld& world, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("dataset.tsv");
    save_dataset(world.dataset, out);
  }
  {
    auto out = open("zh.vec");
    save_embeddings(*world.zh_embeddings, world.zh_tokens, out);
  }
  {
    auto out = open("en.vec");
    save_embeddings(*world.en_embeddings, world.en_tokens, out);
  }
  {
    auto out = open("lexicon.tsv");
    for (const auto& [term, ts] : world.lexicon_rows) {
      out << term << '\t';
      for (std::size_t i = 0; i < ts.size(); ++i) out << (i ? "||" : "") << ts[i];
      out << '\n';
    }
  }
  for (const auto& [name, docs] : {std::pair{"corpus12.txt", &world.corpus12},
                                   std::pair{"corpus13.txt", &world.corpus13}}) {
    auto out = open(name);
    for (const auto& d : *docs) out << d << '\n';
  }
}

}  // namespace medsyn::synth
