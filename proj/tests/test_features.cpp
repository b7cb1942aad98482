#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "medsyn/embed_feats.hpp"
#include "medsyn/error.hpp"
#include "medsyn/random.hpp"
#include "medsyn/string_feats.hpp"
#include "medsyn/text.hpp"
#include "medsyn/web_dist.hpp"
#include "medsyn/zh_feats.hpp"
#include "oracles.hpp"

using namespace medsyn;

namespace {

using Strings = std::vector<std::string>;

const PinyinTable& bundled_pinyin() {
  static const PinyinTable t = [] {
    std::ifstream in(MEDSYN_DATA_DIR "/pinyin.tsv");
    return load_pinyin_table(in);
  }();
  return t;
}

const RadicalTable& bundled_radicals() {
  static const RadicalTable t = [] {
    std::ifstream in(MEDSYN_DATA_DIR "/radicals.tsv");
    return load_radical_table(in);
  }();
  return t;
}

class FixedProvider : public web::HitCountProvider {
 public:
  FixedProvider(std::uint64_t fx, std::uint64_t fy, std::uint64_t fxy, double log_m)
      : fx_(fx), fy_(fy), fxy_(fxy), log_m_(log_m) {}
  std::uint64_t hits(std::string_view t) const override { return t == "x" ? fx_ : fy_; }
  std::uint64_t cohits(std::string_view, std::string_view) const override { return fxy_; }
  double log_m() const override { return log_m_; }

 private:
  std::uint64_t fx_, fy_, fxy_;
  double log_m_;
};

}  // namespace

// ---- embed

TEST(Cosine, PaperCases) {
  const std::vector<double> a{0.3, -1.2, 2.0};
  EXPECT_NEAR(embed::cosine_similarity(a, a), 1.0, 1e-9);
  EXPECT_NEAR(embed::cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0, 1e-9);
  std::vector<double> neg(a);
  for (auto& x : neg) x = -x;
  EXPECT_NEAR(embed::cosine_similarity(a, neg), -1.0, 1e-9);
}

TEST(Cosine, Errors) {
  EXPECT_THROW(embed::cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}), Error);
  EXPECT_THROW(embed::cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 0}), Error);
}

TEST(Cosine, SymmetricAndScaleInvariant) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(6), b(6);
    for (auto& x : a) x = standard_normal(rng);
    for (auto& x : b) x = standard_normal(rng);
    const double c = embed::cosine_similarity(a, b);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    EXPECT_NEAR(c, embed::cosine_similarity(b, a), 1e-12);
    auto scaled = a;
    const double k = 0.1 + 10 * uniform_unit(rng);
    for (auto& x : scaled) x *= k;
    EXPECT_NEAR(c, embed::cosine_similarity(scaled, b), 1e-12);
  }
}

TEST(Average, Examples) {
  const std::vector<embed::TermVector> two{{1, 0}, {0, 1}};
  EXPECT_EQ(embed::average_vector(two), (embed::TermVector{0.5, 0.5}));
  const std::vector<embed::TermVector> one{{2, -3}};
  EXPECT_EQ(embed::average_vector(one), one[0]);
  EXPECT_THROW(embed::average_vector(std::vector<embed::TermVector>{}), Error);
  EXPECT_THROW(embed::average_vector(std::vector<embed::TermVector>{{1}, {1, 2}}), Error);
}

TEST(Euclidean, Examples) {
  EXPECT_EQ(embed::euclidean_distance(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_EQ(embed::euclidean_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}), 5.0);
  EXPECT_THROW(embed::euclidean_distance(std::vector<double>{0}, std::vector<double>{3, 4}), Error);
}

TEST(TermVector, LookupAndFallback) {
  EmbeddingTable t(2);
  t.add("肝癌", {1, 1});
  t.add("胃", {2, 0});
  t.add("炎", {0, 4});
  EXPECT_EQ(embed::lookup_term_vector(Term("肝癌"), t), (embed::TermVector{1, 1}));
  EXPECT_EQ(embed::lookup_term_vector(Term("胃炎"), t), (embed::TermVector{1, 2}));
  EXPECT_EQ(embed::lookup_term_vector(Term("胃病"), t), (embed::TermVector{2, 0}));
  EXPECT_FALSE(embed::lookup_term_vector(Term("头痛"), t).has_value());
}

TEST(SetCosine, HandComputedToyTable) {
  EmbeddingTable t(2);
  t.add("liver", {1, 0});
  t.add("cancer", {0, 1});
  t.add("carcinoma", {1, 1});
  // liver cancer -> (0.5, 0.5); liver carcinoma -> (1, 0.5)
  // cos = (0.5 + 0.25) / (sqrt(0.5) * sqrt(1.25))
  const double expected = 0.75 / (std::sqrt(0.5) * std::sqrt(1.25));
  const Strings a{"liver cancer"}, b{"liver carcinoma"};
  const auto got = embed::set_cosine(a, b, t);
  ASSERT_TRUE(got.has_value());
  EXPECT_NEAR(*got, expected, 1e-12);
  EXPECT_NEAR(*embed::set_cosine(a, a, t), 1.0, 1e-12);
  EXPECT_FALSE(embed::set_cosine(Strings{}, b, t).has_value());
  EXPECT_FALSE(embed::set_cosine(a, Strings{"unknown words"}, t).has_value());
}

TEST(SetCosine, PermutationInvariant) {
  EmbeddingTable t(3);
  Rng rng(9);
  const Strings words{"liver", "cancer", "tumor", "gastric", "ulcer", "fever"};
  for (const auto& w : words) t.add(w, {standard_normal(rng), standard_normal(rng), standard_normal(rng)});
  const Strings a{"liver cancer", "liver tumor", "fever"};
  const Strings b{"gastric ulcer", "cancer"};
  Strings ap = a;
  std::reverse(ap.begin(), ap.end());
  Strings bp = b;
  std::reverse(bp.begin(), bp.end());
  EXPECT_NEAR(*embed::set_cosine(a, b, t), *embed::set_cosine(ap, bp, t), 1e-12);
  EXPECT_NEAR(*embed::set_cosine(a, b, t), *embed::set_cosine(b, a, t), 1e-12);
}

// ---- string features

TEST(EditDistance, Examples) {
  using strfeat::SymbolSequence;
  auto ed = [](const char* a, const char* b) {
    return strfeat::edit_distance(SymbolSequence::characters(a), SymbolSequence::characters(b));
  };
  EXPECT_EQ(ed("abc", "abc"), 0u);
  EXPECT_EQ(ed("", "abc"), 3u);
  EXPECT_EQ(ed("kitten", "sitting"), 3u);
  EXPECT_EQ(oracle::edit_distance(U"kitten", U"sitting"), 3u);
  EXPECT_EQ(ed("埃博拉", "埃播拉"), 1u);
  EXPECT_EQ(strfeat::edit_distance(SymbolSequence::words("liver cancer"),
                                   SymbolSequence::words("Liver carcinoma")),
            1u);
  EXPECT_THROW(strfeat::edit_distance(SymbolSequence::words("a"), SymbolSequence::characters("a")), Error);
}

TEST(EditDistance, MatchesOracleOnRandomStrings) {
  Rng rng(17);
  const std::u32string alphabet = U"ab癌病";
  for (int i = 0; i < 2000; ++i) {
    std::u32string a, b;
    const auto la = uniform_below(rng, 8), lb = uniform_below(rng, 8);
    for (std::uint64_t k = 0; k < la; ++k) a.push_back(alphabet[uniform_below(rng, alphabet.size())]);
    for (std::uint64_t k = 0; k < lb; ++k) b.push_back(alphabet[uniform_below(rng, alphabet.size())]);
    EXPECT_EQ(strfeat::levenshtein<char32_t>(a, b), oracle::edit_distance(a, b));
  }
}

TEST(RelativeEditDistance, Examples) {
  EXPECT_EQ(strfeat::relative_edit_distance("肝癌", "肝癌"), 0.0);
  EXPECT_EQ(strfeat::relative_edit_distance("ab", "cd"), 1.0);
  EXPECT_NEAR(strfeat::relative_edit_distance("liver", "livers"), 1.0 / 6.0, 1e-15);
  EXPECT_THROW(strfeat::relative_edit_distance("", ""), Error);
  EXPECT_EQ(strfeat::relative_edit_distance("", "a"), 1.0);
}

TEST(SetEditDistance, Examples) {
  const Strings ab{"ab"}, cd{"cd"};
  EXPECT_EQ(*strfeat::set_edit_distance(ab, ab), 0.0);
  EXPECT_EQ(*strfeat::set_edit_distance(ab, ab, strfeat::Aggregation::Min), 0.0);
  EXPECT_EQ(*strfeat::set_edit_distance(ab, cd), 1.0);
  const Strings two{"liver cancer", "hepatic carcinoma"}, one{"liver cancer"};
  const double cross = static_cast<double>(oracle::edit_distance(U"hepatic carcinoma", U"liver cancer")) / 17.0;
  EXPECT_NEAR(*strfeat::set_edit_distance(two, one), cross, 1e-15);
  EXPECT_EQ(*strfeat::set_edit_distance(two, one, strfeat::Aggregation::Min), 0.0);
  EXPECT_FALSE(strfeat::set_edit_distance(Strings{}, one).has_value());
  EXPECT_EQ(strfeat::parse_aggregation("max"), strfeat::Aggregation::Max);
  EXPECT_EQ(strfeat::parse_aggregation("min"), strfeat::Aggregation::Min);
  EXPECT_EQ(strfeat::to_string(strfeat::Aggregation::Min), "min");
  EXPECT_THROW(strfeat::parse_aggregation("mean"), Error);
}

TEST(DuplicateWord, Examples) {
  EXPECT_EQ(strfeat::duplicate_word(Strings{"liver cancer"}, Strings{"liver carcinoma"}), true);
  EXPECT_EQ(strfeat::duplicate_word(Strings{"fever"}, Strings{"headache"}), false);
  EXPECT_EQ(strfeat::duplicate_word(Strings{"fever"}, Strings{"fever"}), true);
  EXPECT_FALSE(strfeat::duplicate_word(Strings{}, Strings{"fever"}).has_value());
}

TEST(Subsequence, Examples) {
  EXPECT_EQ(strfeat::subsequence(Strings{"abc"}, Strings{"aXbYc"}), true);
  EXPECT_EQ(strfeat::subsequence(Strings{"abc"}, Strings{"acb"}), false);
  EXPECT_EQ(strfeat::subsequence(Strings{"liver"}, Strings{"liver"}), true);
  EXPECT_EQ(strfeat::subsequence(Strings{"aXbYc"}, Strings{"abc"}), true);
  EXPECT_FALSE(strfeat::subsequence(Strings{"abc"}, Strings{}).has_value());
  EXPECT_TRUE(strfeat::is_subsequence(U"", U"abc"));
}

TEST(FirstCharacters, Examples) {
  EXPECT_EQ(strfeat::first_characters_match(Strings{"liver cancer"}, Strings{"liver carcinoma"}), true);
  EXPECT_EQ(strfeat::first_characters_match(Strings{"liver cancer"}, Strings{"lung cancer"}), true);
  EXPECT_EQ(strfeat::first_characters_match(Strings{"liver cancer"}, Strings{"hepatic carcinoma"}), false);
  EXPECT_EQ(strfeat::token_initials("liver cancer"), U"lc");
}

TEST(Abbreviation, Examples) {
  EXPECT_EQ(strfeat::abbreviation_match(Strings{"USA"}, Strings{"United States of America"}), true);
  EXPECT_EQ(strfeat::abbreviation_match(Strings{"United States of America"}, Strings{"USA"}), true);
  EXPECT_EQ(strfeat::abbreviation_match(Strings{"USA"}, Strings{"USA"}), true);
  EXPECT_EQ(strfeat::abbreviation_match(Strings{"USB"}, Strings{"United States of America"}), false);
  EXPECT_EQ(strfeat::abbreviation_match(Strings{"usa"}, Strings{"united states"}), false);
  EXPECT_EQ(strfeat::uppercase_letters("United States of America"), U"USA");
}

TEST(EnglishFeatures, AnyCrossPairFires) {
  const Strings a{"fever", "liver cancer"};
  const Strings b{"headache", "liver carcinoma"};
  EXPECT_EQ(strfeat::duplicate_word(a, b), true);
  EXPECT_EQ(strfeat::first_characters_match(a, b), true);
}

// ---- pinyin and radicals

TEST(Pinyin, Sequence) {
  const auto seq = zh::pinyin_sequence(Term("埃博拉病毒"), bundled_pinyin());
  EXPECT_EQ(seq.syllables, (Strings{"ai", "bo", "la", "bing", "du"}));
  EXPECT_EQ(seq.coverage, 1.0);
  EXPECT_EQ(zh::joined_pinyin(seq), "ai-bo-la-bing-du");

  PinyinTable t;
  t.add(U'癌', "ai");
  const auto half = zh::pinyin_sequence(Term("癌症"), t);
  EXPECT_EQ(half.syllables, (Strings{"ai"}));
  EXPECT_EQ(half.coverage, 0.5);
  const auto none = zh::pinyin_sequence(Term("头痛"), t);
  EXPECT_TRUE(none.syllables.empty());
  EXPECT_EQ(none.coverage, 0.0);
}

TEST(Pinyin, EditDistanceExamples) {
  const auto& t = bundled_pinyin();
  EXPECT_NEAR(*zh::pinyin_edit_distance(Term("埃博拉病毒"), Term("埃播拉病毒"), t), 0.0, 1e-9);
  EXPECT_EQ(*zh::pinyin_edit_distance(Term("肝癌"), Term("肝癌"), t), 0.0);
  const double oracle_value = static_cast<double>(oracle::edit_distance(U"gan-ai", U"wei-ai")) / 6.0;
  EXPECT_EQ(oracle_value, 0.5);
  EXPECT_NEAR(*zh::pinyin_edit_distance(Term("肝癌"), Term("胃癌"), t), oracle_value, 1e-15);
  PinyinTable partial;
  partial.add(U'癌', "ai");
  EXPECT_FALSE(zh::pinyin_edit_distance(Term("肝癌"), Term("癌"), partial).has_value());
}

TEST(Pinyin, HomophoneSwapIsInvariant) {
  const auto& t = bundled_pinyin();
  std::map<std::string, std::vector<char32_t>> by_syllable;
  for (const auto& [ch, syl] : t.entries()) by_syllable[syl].push_back(ch);
  Rng rng(23);
  int checked = 0;
  for (const auto& [syl, chars] : by_syllable) {
    if (chars.size() < 2) continue;
    std::u32string a = U"肝";
    a.push_back(chars[0]);
    a.push_back(U'病');
    std::u32string b = a;
    b[1] = chars[1 + uniform_below(rng, chars.size() - 1)];
    EXPECT_EQ(*zh::pinyin_edit_distance(Term(text::encode_utf8(a)), Term(text::encode_utf8(b)), t), 0.0);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Radicals, Examples) {
  const auto& t = bundled_radicals();
  EXPECT_EQ(*zh::common_radicals(Term("癌"), Term("癌"), t), 1.0);
  EXPECT_EQ(*zh::common_radicals(Term("癌"), Term("病"), t), 1.0);
  RadicalTable toy;
  toy.add(U'肝', U'月');
  toy.add(U'癌', U'疒');
  toy.add(U'头', U'大');
  toy.add(U'痛', U'疒');
  EXPECT_EQ(*zh::common_radicals(Term("肝癌"), Term("头痛"), toy), 0.5);
  toy.add(U'发', U'又');
  toy.add(U'热', U'灬');
  EXPECT_EQ(*zh::common_radicals(Term("肝癌"), Term("发热"), toy), 0.0);
  EXPECT_FALSE(zh::common_radicals(Term("肝癌"), Term("咳嗽"), toy).has_value());
}

TEST(Radicals, BoundedOnRandomPairs) {
  const auto& t = bundled_radicals();
  const auto entries = t.entries();
  Rng rng(31);
  auto random_term = [&] {
    std::u32string s;
    const auto len = 1 + uniform_below(rng, 5);
    for (std::uint64_t i = 0; i < len; ++i) s.push_back(entries[uniform_below(rng, entries.size())].first);
    return Term(text::encode_utf8(s));
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_term(), b = random_term();
    const auto v = zh::common_radicals(a, b, t);
    ASSERT_TRUE(v.has_value());
    EXPECT_GE(*v, 0.0);
    EXPECT_LE(*v, 1.0);
    EXPECT_EQ(*v, *zh::common_radicals(b, a, t));
  }
}

// ---- web distance

TEST(CorpusIndex, Counts) {
  const Strings docs{"肝癌 肝肿瘤", "肝癌"};
  const Strings vocab{"肝癌", "肝肿瘤", "胃癌"};
  const auto idx = web::build_corpus_index(docs, vocab);
  EXPECT_EQ(idx.total_documents(), 2u);
  EXPECT_EQ(idx.document_frequency("肝癌"), 2u);
  EXPECT_EQ(idx.document_frequency("肝肿瘤"), 1u);
  EXPECT_EQ(idx.document_frequency("胃癌"), 0u);
  EXPECT_EQ(idx.co_document_frequency("肝癌", "肝肿瘤"), 1u);
  EXPECT_EQ(idx.co_document_frequency("肝肿瘤", "肝癌"), 1u);
  EXPECT_EQ(idx.co_document_frequency("肝癌", "肝癌"), 2u);
  EXPECT_THROW(web::build_corpus_index(docs, Strings{}), Error);
  const auto empty = web::build_corpus_index(Strings{}, vocab);
  EXPECT_EQ(empty.total_documents(), 0u);
  EXPECT_EQ(empty.document_frequency("肝癌"), 0u);
}

TEST(CorpusIndex, SaveLoadIsByteStable) {
  const Strings docs{"肝癌 肝肿瘤 胃癌", "肝癌", "胃癌 肝肿瘤"};
  const Strings vocab{"胃癌", "肝癌", "肝肿瘤"};
  const auto idx = web::build_corpus_index(docs, vocab);
  std::ostringstream a;
  idx.save(a);
  std::istringstream in(a.str());
  const auto back = web::CorpusIndex::load(in);
  std::ostringstream b;
  back.save(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(back.co_document_frequency("胃癌", "肝肿瘤"), 2u);
  std::istringstream bad("#DF\nx\tnotanumber\n");
  EXPECT_THROW(web::CorpusIndex::load(bad), Error);
}

TEST(Ngd, PaperAndDeskCases) {
  auto v = web::ngd("x", "y", FixedProvider(50, 50, 50, 6));
  ASSERT_EQ(v.kind, web::NgdValue::Kind::Finite);
  EXPECT_NEAR(v.value, 0.0, 1e-9);
  EXPECT_EQ(web::ngd("x", "y", FixedProvider(50, 20, 0, 6)).kind, web::NgdValue::Kind::Infinite);
  v = web::ngd("x", "y", FixedProvider(1000, 100, 100, 10));
  ASSERT_EQ(v.kind, web::NgdValue::Kind::Finite);
  EXPECT_NEAR(v.value, 0.125, 1e-12);
  EXPECT_EQ(web::ngd("x", "y", FixedProvider(0, 100, 0, 10)).kind, web::NgdValue::Kind::Missing);
  EXPECT_THROW(web::ngd("x", "y", FixedProvider(1000, 100, 100, 2)), Error);
}

TEST(Ngd, NegativeRawValueIsClamped) {
  const auto v = web::ngd("x", "y", FixedProvider(100, 100, 1000, 10));
  ASSERT_EQ(v.kind, web::NgdValue::Kind::Finite);
  EXPECT_EQ(v.value, 0.0);
  EXPECT_TRUE(v.clamped);
}

TEST(Ngd, MonotoneInCoOccurrence) {
  double prev = INFINITY;
  for (std::uint64_t fxy = 1; fxy <= 100; ++fxy) {
    const auto v = web::ngd("x", "y", FixedProvider(1000, 100, fxy, 10));
    ASSERT_EQ(v.kind, web::NgdValue::Kind::Finite);
    EXPECT_LE(v.value, prev);
    prev = v.value;
  }
}
