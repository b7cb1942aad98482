#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "medsyn/error.hpp"
#include "medsyn/random.hpp"
#include "medsyn/sweep.hpp"
#include "medsyn/synthetic.hpp"
#include "medsyn/text.hpp"
#include "medsyn/web_dist.hpp"
#include "oracles.hpp"

using namespace medsyn;
namespace fs = std::filesystem;

namespace {

struct Tables {
  std::shared_ptr<PinyinTable> pinyin;
  std::shared_ptr<RadicalTable> radicals;
};

const Tables& tables() {
  static const Tables t = [] {
    std::ifstream p(MEDSYN_DATA_DIR "/pinyin.tsv"), r(MEDSYN_DATA_DIR "/radicals.tsv");
    return Tables{std::make_shared<PinyinTable>(load_pinyin_table(p)),
                  std::make_shared<RadicalTable>(load_radical_table(r))};
  }();
  return t;
}

struct SmallWorld {
  synth::SyntheticWorld world;
  ResourceBundle bundle;
  TrainTestSplit split;
};

const SmallWorld& small_world() {
  static const SmallWorld w = [] {
    auto world = synth::generate({60, 60, 4, 8, 8}, *tables().pinyin, *tables().radicals);
    auto bundle = world.bundle(tables().pinyin, tables().radicals);
    auto split = split_train_test(world.dataset, {Fraction{}, 4, true});
    return SmallWorld{std::move(world), std::move(bundle), std::move(split)};
  }();
  return w;
}

sweep::SweepRow row(std::uint32_t bits, double p, double r, double f) {
  return {FeatureMask(bits), Metrics{p, r, f}, 0.0, 0};
}

std::string tsv(const sweep::SweepReport& r) {
  std::ostringstream out;
  sweep::write_report_tsv(r, out);
  return out.str();
}

Dataset identical_vs_disjoint(std::size_t n, std::uint64_t seed) {
  const std::u32string pool = U"甲乙丙丁戊己庚辛壬癸子丑寅卯辰巳午未申酉戌亥";
  Rng rng(seed);
  auto word = [&](std::size_t from, std::size_t to) {
    std::u32string s;
    for (int k = 0; k < 3; ++k) s.push_back(pool[from + uniform_below(rng, to - from)]);
    return text::encode_utf8(s);
  };
  std::vector<LabeledPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = word(0, 22);
    pairs.push_back({Term(w), Term(w), Label::Positive});
    pairs.push_back({Term(word(0, 11)), Term(word(11, 22)), Label::Negative});
  }
  return Dataset(std::move(pairs));
}

}  // namespace

TEST(Enumerate, Counts) {
  const auto two = sweep::enumerate_masks(2);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_EQ(two[0].to_string(), "1");
  EXPECT_EQ(two[1].to_string(), "2");
  EXPECT_EQ(two[2].to_string(), "1,2");
  EXPECT_EQ(sweep::enumerate_masks(13).size(), 8191u);
  EXPECT_EQ(sweep::enumerate_masks(1).size(), 1u);
  EXPECT_THROW(sweep::enumerate_masks(0), Error);
  EXPECT_THROW(sweep::enumerate_masks(14), Error);
}

TEST(Rank, TieChain) {
  auto r = sweep::rank(std::vector{row(1, 0.9, 0.9, 0.9), row(2, 0.95, 0.95, 0.95)});
  EXPECT_EQ(r[0].mask.bits(), 2u);
  r = sweep::rank(std::vector{row(1, 0.9, 0.5, 0.8), row(2, 0.92, 0.5, 0.8)});
  EXPECT_EQ(r[0].mask.bits(), 2u);
  r = sweep::rank(std::vector{row(1, 0.9, 0.5, 0.8), row(2, 0.9, 0.6, 0.8)});
  EXPECT_EQ(r[0].mask.bits(), 2u);
  r = sweep::rank(std::vector{row(5, 0.9, 0.5, 0.8), row(3, 0.9, 0.5, 0.8), row(4, 0.9, 0.5, 0.8)});
  EXPECT_EQ(r[0].mask.bits(), 3u);
  EXPECT_EQ(r[1].mask.bits(), 4u);
  EXPECT_EQ(r[2].mask.bits(), 5u);
}

TEST(Rank, StrictTotalOrder) {
  Rng rng(6);
  std::vector<sweep::SweepRow> rows;
  for (std::uint32_t b = 1; b < 300; ++b) {
    const double levels[] = {0.5, 0.75, 1.0};
    rows.push_back(row(b, levels[uniform_below(rng, 3)], levels[uniform_below(rng, 3)], levels[uniform_below(rng, 3)]));
  }
  for (const auto& a : rows) {
    EXPECT_FALSE(sweep::ranks_before(a, a));
    for (const auto& b : rows) {
      if (a.mask != b.mask) EXPECT_NE(sweep::ranks_before(a, b), sweep::ranks_before(b, a));
    }
  }
  auto shuffled = rows;
  shuffle(std::span(shuffled), rng);
  const auto r1 = sweep::rank(rows), r2 = sweep::rank(shuffled);
  for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_EQ(r1[i].mask, r2[i].mask);
}

TEST(Frequency, Examples) {
  const std::vector rows{row(1, 1, 1, 1), row(3, 0.9, 0.9, 0.9), row(2, 0.8, 0.8, 0.8)};
  const auto f = sweep::top_fraction_feature_frequency(rows, 1.0);
  EXPECT_EQ(f.considered, 3u);
  EXPECT_EQ(f.counts[0], 2u);
  EXPECT_EQ(f.counts[1], 2u);
  EXPECT_THROW(sweep::top_fraction_feature_frequency(rows, 0.2), Error);
  EXPECT_THROW(sweep::top_fraction_feature_frequency(rows, 0.0), Error);
  EXPECT_THROW(sweep::top_fraction_feature_frequency(rows, 1.5), Error);

  std::vector<sweep::SweepRow> all;
  for (auto m : sweep::enumerate_masks(13)) all.push_back({m, Metrics{}, 0.0, 0});
  const auto g = sweep::top_fraction_feature_frequency(all, 0.1);
  EXPECT_EQ(g.considered, 819u);
  for (auto c : g.counts) EXPECT_LE(c, g.considered);
}

TEST(TopK, Examples) {
  std::vector<sweep::SweepRow> all;
  for (auto m : sweep::enumerate_masks(13)) all.push_back({m, Metrics{}, 0.0, 0});
  EXPECT_EQ(sweep::top_k_table(all, 10).size(), 10u);
  const std::vector few{row(1, 1, 1, 1), row(2, 1, 1, 1)};
  EXPECT_EQ(sweep::top_k_table(few, 10).size(), 2u);
  EXPECT_EQ(FeatureMask::parse("1,4,5,11,12").to_string(), "1,4,5,11,12");
}

TEST(RunSingle, IdenticalVersusDisjointSeparatesOnEditDistance) {
  const auto train = identical_vs_disjoint(40, 1), test = identical_vs_disjoint(20, 2);
  const ResourceBundle bundle;
  const auto r = sweep::run_single(FeatureMask::parse("4"), train, test, bundle, {});
  EXPECT_EQ(r.metrics.f1, 1.0);

  std::vector<std::optional<double>> trx, tex;
  for (const auto& p : train.pairs()) trx.push_back(extract_features(p, bundle, FeatureMask::parse("4")).value(FeatureId(4)));
  for (const auto& p : test.pairs()) tex.push_back(extract_features(p, bundle, FeatureMask::parse("4")).value(FeatureId(4)));
  EXPECT_EQ(oracle::threshold_f1(trx, train.labels(), tex, test.labels()), 1.0);
}

TEST(RunSingle, AllNegativePredictionsScoreZero) {
  const auto train = identical_vs_disjoint(40, 1);
  std::vector<LabeledPair> pos;
  for (const auto& p : identical_vs_disjoint(10, 3).pairs()) {
    if (p.label == Label::Negative) pos.push_back({p.a, p.b, Label::Positive});
  }
  const auto r = sweep::run_single(FeatureMask::parse("4"), train, Dataset(pos), ResourceBundle{}, {});
  EXPECT_EQ(r.metrics, (Metrics{0.0, 0.0, 0.0}));
}

TEST(RunSingle, DeterministicAndEqualToSweepRow) {
  const auto& w = small_world();
  sweep::SweepConfig cfg;
  cfg.train.seed = 77;
  const auto mask = FeatureMask::parse("1,4,10,11");
  const auto a = sweep::run_single(mask, w.split.train, w.split.test, w.bundle, cfg);
  const auto b = sweep::run_single(mask, w.split.train, w.split.test, w.bundle, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.seed, sweep::mask_seed(77, mask));
  const std::vector masks{FeatureMask::parse("2"), mask};
  const auto rep = sweep::run_sweep(masks, w.split.train, w.split.test, w.bundle, cfg, 2);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[1], a);
  EXPECT_EQ(rep.dataset_fingerprint.size(), 16u);
}

TEST(RunSweep, ParallelismDoesNotChangeReports) {
  const auto& w = small_world();
  const auto train = sweep::extract_table(w.split.train, w.bundle, 1);
  const auto test = sweep::extract_table(w.split.test, w.bundle, 3);
  const auto masks = sweep::enumerate_masks(6);
  sweep::SweepConfig cfg;
  cfg.train.seed = 5;
  const auto one = sweep::run_sweep(masks, train, test, cfg, 1);
  const auto eight = sweep::run_sweep(masks, train, test, cfg, 8);
  EXPECT_EQ(tsv(one), tsv(eight));
  EXPECT_EQ(one.rows.size(), 63u);
  EXPECT_THROW(sweep::run_sweep(std::vector{masks[0], masks[0]}, train, test, cfg, 1), Error);
}

TEST(RunSweep, NoiseColumnLeavesOtherMasksUnchanged) {
  const auto& w = small_world();
  auto train = sweep::extract_table(w.split.train, w.bundle, 1);
  auto test = sweep::extract_table(w.split.test, w.bundle, 1);
  std::vector<FeatureMask> masks;
  for (auto m : sweep::enumerate_masks(13)) {
    if (m.bits() % 97 == 0) masks.push_back(m);
  }
  sweep::SweepConfig cfg;
  const auto before = sweep::run_sweep(masks, train, test, cfg, 2);
  Rng rng(99);
  for (auto* t : {&train, &test}) {
    for (auto& r : t->rows) r.set(FeatureId(13), standard_normal(rng));
  }
  const auto after = sweep::run_sweep(masks, train, test, cfg, 2);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (!masks[i].contains(FeatureId(13))) EXPECT_EQ(before.rows[i], after.rows[i]) << masks[i].to_string();
  }
}

TEST(Stability, RunsAndSummary) {
  const auto& w = small_world();
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto s = sweep::stability_runs(FeatureMask::parse("4,11"), w.world.dataset, w.bundle, {}, Fraction{}, seeds);
  ASSERT_EQ(s.runs.size(), 2u);
  EXPECT_NEAR(s.mean.f1, (s.runs[0].f1 + s.runs[1].f1) / 2, 1e-15);
  EXPECT_NEAR(s.stddev.f1, std::abs(s.runs[0].f1 - s.runs[1].f1) / std::sqrt(2.0), 1e-12);
  const std::vector<std::uint64_t> dup{3, 3};
  EXPECT_THROW(sweep::stability_runs(FeatureMask::parse("4"), w.world.dataset, w.bundle, {}, Fraction{}, dup), Error);
}

TEST(Reports, TsvRoundTripAndSidecars) {
  sweep::SweepReport r;
  r.rows = {row(1, 1.0 / 3.0, 0.5, 0.4), row(4099, 1, 0.96, 0.9795918367346939)};
  r.dataset_fingerprint = "0123456789abcdef";
  const auto text = tsv(r);
  EXPECT_EQ(text.substr(0, text.find('\n')), "bitmask\tfeatures\tprecision\trecall\tf1\tseconds");
  EXPECT_NE(text.find("4099\t1,2,13\t1\t0.96\t0.9795918367346939\t0\n"), std::string::npos);
  std::istringstream in(text);
  const auto back = sweep::read_report_tsv(in);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].metrics, r.rows[0].metrics);
  EXPECT_EQ(tsv(back), text);
  std::istringstream bad("bitmask\tfeatures\tprecision\trecall\tf1\tseconds\n3\t1\t1\t1\t1\t0\n");
  EXPECT_THROW(sweep::read_report_tsv(bad), Error);

  std::ostringstream js;
  sweep::write_report_json(r, js);
  EXPECT_NE(js.str().find("0123456789abcdef"), std::string::npos);

  sweep::FeatureFrequency f;
  f.considered = 4;
  f.counts[0] = 3;
  std::ostringstream ft;
  sweep::write_frequency_tsv(f, ft);
  EXPECT_EQ(ft.str().substr(0, ft.str().find('\n')), "feature_id\tcount\tfraction");
  EXPECT_NE(ft.str().find("\n1\t3\t0.75\n"), std::string::npos);
}

TEST(Reports, FormatDoubleRoundTrips) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double v = standard_normal(rng) * std::pow(10.0, static_cast<int>(uniform_below(rng, 40)) - 20);
    EXPECT_EQ(std::stod(sweep::format_double(v)), v);
  }
  EXPECT_EQ(sweep::format_double(1.0), "1");
  EXPECT_EQ(sweep::format_double(0.0), "0");
}

TEST(Synthetic, DeterministicBalancedAndReloadable) {
  const auto& t = tables();
  const auto a = synth::generate({30, 20, 9, 4, 4}, *t.pinyin, *t.radicals);
  const auto b = synth::generate({30, 20, 9, 4, 4}, *t.pinyin, *t.radicals);
  EXPECT_EQ(a.dataset.fingerprint(), b.dataset.fingerprint());
  EXPECT_EQ(a.dataset.positive_count(), 30u);
  EXPECT_EQ(a.dataset.negative_count(), 20u);
  EXPECT_EQ(a.corpus13, b.corpus13);
  const auto c = synth::generate({30, 20, 10, 4, 4}, *t.pinyin, *t.radicals);
  EXPECT_NE(a.dataset.fingerprint(), c.dataset.fingerprint());

  const auto dir = fs::temp_directory_path() / "medsyn_synth_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  synth::write_world(a, dir);
  std::ifstream ds(dir / "dataset.tsv"), zh(dir / "zh.vec"), en(dir / "en.vec"), lx(dir / "lexicon.tsv");
  const auto d = load_dataset(ds);
  EXPECT_EQ(d.fingerprint(), a.dataset.fingerprint());
  ResourceBundle loaded = a.bundle(t.pinyin, t.radicals);
  loaded.zh_embeddings = std::make_shared<EmbeddingTable>(load_embeddings(zh));
  loaded.en_embeddings = std::make_shared<EmbeddingTable>(load_embeddings(en));
  loaded.lexicon = std::make_shared<TranslationLexicon>(load_translation_lexicon(lx));
  const auto direct = a.bundle(t.pinyin, t.radicals);
  for (const auto& p : d.pairs()) {
    const auto x = extract_features(p, direct, FeatureMask::full());
    const auto y = extract_features(p, loaded, FeatureMask::full());
    for (auto id : FeatureId::all()) EXPECT_EQ(x.value(id), y.value(id));
  }
  fs::remove_all(dir);
}
