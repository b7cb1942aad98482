#include "medsyn/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "medsyn/error.hpp"
#include "medsyn/model.hpp"
#include "medsyn/sweep.hpp"
#include "medsyn/text.hpp"
#include "medsyn/web_dist.hpp"

#ifndef MEDSYN_VERSION
#define MEDSYN_VERSION "unknown"
#endif

namespace medsyn::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* const kKeys[] = {"dataset",   "zh_embeddings", "en_embeddings",   "pinyin",
                             "radicals",  "lexicon",       "index12",         "index13",
                             "seed",      "train_fraction", "c",              "tolerance",
                             "max_epochs", "eq5_aggregation", "ngd_max",       "log_m",
                             "parallelism", "output_dir",  "mask"};

std::string flag_for(std::string key) {
  for (auto& ch : key) {
    if (ch == '_') ch = '-';
  }
  return "--" + key;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

template <class T, class Loader>
std::shared_ptr<const T> load_optional(const std::string& path, Loader load) {
  if (path.empty()) return nullptr;
  auto in = open_in(path);
  try {
    return std::make_shared<const T>(load(in));
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::shared_ptr<const web::HitCountProvider> load_provider(const std::string& path, double log_m) {
  auto index = load_optional<web::CorpusIndex>(path, web::CorpusIndex::load);
  if (!index) return nullptr;
  return std::make_shared<web::CorpusProvider>(index, log_m);
}

ResourceBundle load_bundle(const RunConfig& cfg) {
  ResourceBundle b;
  b.zh_embeddings = load_optional<EmbeddingTable>(cfg.zh_embeddings, load_embeddings);
  b.en_embeddings = load_optional<EmbeddingTable>(cfg.en_embeddings, load_embeddings);
  b.pinyin = load_optional<PinyinTable>(cfg.pinyin, load_pinyin_table);
  b.radicals = load_optional<RadicalTable>(cfg.radicals, load_radical_table);
  b.lexicon = load_optional<TranslationLexicon>(cfg.lexicon, load_translation_lexicon);
  b.provider12 = load_provider(cfg.index12, cfg.log_m);
  b.provider13 = load_provider(cfg.index13, cfg.log_m);
  b.eq5_aggregation = strfeat::parse_aggregation(cfg.eq5_aggregation);
  b.ngd_max = cfg.ngd_max;
  return b;
}

Dataset load_dataset_file(const std::string& path) {
  if (path.empty()) throw Error("no dataset given (--dataset)");
  auto in = open_in(path);
  try {
    return load_dataset(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

TrainConfig train_config(const RunConfig& cfg) {
  return TrainConfig{cfg.c, cfg.tolerance, cfg.max_epochs, cfg.seed};
}

TrainTestSplit split_of(const Dataset& d, const RunConfig& cfg) {
  return split_train_test(d, SplitConfig{Fraction::parse(cfg.train_fraction), cfg.seed, true});
}

std::vector<FeatureVector> extract_all(const Dataset& d, const ResourceBundle& b, FeatureMask mask,
                                       ExtractionStats* stats) {
  std::vector<FeatureVector> rows;
  rows.reserve(d.size());
  for (const auto& p : d.pairs()) rows.push_back(extract_features(p, b, mask, stats));
  return rows;
}

Metrics score(const Model& m, std::span<const FeatureVector> rows, std::span<const Label> labels) {
  std::vector<Label> predicted;
  predicted.reserve(rows.size());
  for (const auto& r : rows) predicted.push_back(m.predict(r));
  return compute_metrics(confusion(predicted, labels));
}

void print_metrics(std::ostream& out, const Metrics& m) {
  out << "precision\t" << sweep::format_double(m.precision) << '\n'
      << "recall\t" << sweep::format_double(m.recall) << '\n'
      << "f1\t" << sweep::format_double(m.f1) << '\n';
}

std::string feature_column(FeatureId id) { return "f" + std::to_string(id.value()); }

void write_feature_tsv(const Dataset& d, std::span<const FeatureVector> rows, FeatureMask mask,
                       std::ostream& out) {
  out << "term_a\tterm_b\tlabel";
  for (auto id : mask.features()) out << '\t' << feature_column(id);
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = d.pairs()[i];
    out << p.a.surface() << '\t' << p.b.surface() << '\t'
        << (p.label == Label::Positive ? 1 : 0);
    for (auto id : mask.features()) {
      const auto v = rows[i].value(id);
      out << '\t' << (v ? sweep::format_double(*v) : "NA");
    }
    out << '\n';
  }
}

struct FeatureFile {
  FeatureMask mask = FeatureMask::full();
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
};

FeatureFile read_feature_tsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty feature file");
  const auto header = text::split(text::chomp(line), "\t");
  if (header.size() < 4 || header[0] != "term_a" || header[1] != "term_b" || header[2] != "label") {
    throw ParseError(1, "feature header must be term_a, term_b, label, f<id>...");
  }
  std::vector<FeatureId> ids;
  for (std::size_t k = 3; k < header.size(); ++k) {
    const auto& h = header[k];
    if (h.size() < 2 || h[0] != 'f') throw ParseError(1, "bad feature column '" + h + "'");
    try {
      ids.emplace_back(std::stoi(h.substr(1)));
    } catch (const std::exception&) {
      throw ParseError(1, "bad feature column '" + h + "'");
    }
  }
  FeatureFile f;
  f.mask = FeatureMask(ids);
  if (f.mask.size() != ids.size()) throw ParseError(1, "duplicate feature column");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::chomp(line);
    if (body.empty()) continue;
    const auto cells = text::split(body, "\t");
    if (cells.size() != header.size()) throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns");
    if (cells[2] != "0" && cells[2] != "1") throw ParseError(lineno, "label must be 0 or 1");
    f.labels.push_back(cells[2] == "1" ? Label::Positive : Label::Negative);
    FeatureVector v(f.mask);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto& cell = cells[k + 3];
      if (cell == "NA") {
        v.set_missing(ids[k]);
        continue;
      }
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || !std::isfinite(x)) throw ParseError(lineno, "bad value '" + cell + "'");
      v.set(ids[k], x);
    }
    f.rows.push_back(std::move(v));
  }
  if (f.rows.empty()) throw Error("feature file has no rows");
  return f;
}

void print_table(std::ostream& out, std::span<const sweep::SweepRow> rows) {
  out << "rank\tbitmask\tfeatures\tprecision\trecall\tf1\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i + 1 << '\t' << r.mask.bits() << '\t' << r.mask.to_string() << '\t'
        << sweep::format_double(r.metrics.precision) << '\t' << sweep::format_double(r.metrics.recall)
        << '\t' << sweep::format_double(r.metrics.f1) << '\n';
  }
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson versions() {
  ojson v;
  v["medsyn"] = MEDSYN_VERSION;
  v["compiler"] = __VERSION__;
  v["cplusplus"] = __cplusplus;
  v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  v["cli11"] = CLI11_VERSION;
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

/// Flags that override config-file values only when given.
class RunOptions {
 public:
  void attach(CLI::App* app) {
    app->add_option("--config", config_path_, "JSON config file; flags take precedence over it");
    const auto defaults = RunConfig{}.to_json();
    bind(app, "dataset", &RunConfig::dataset, "labelled pair TSV", defaults);
    bind(app, "zh_embeddings", &RunConfig::zh_embeddings, "Chinese embedding file", defaults);
    bind(app, "en_embeddings", &RunConfig::en_embeddings, "English embedding file", defaults);
    bind(app, "pinyin", &RunConfig::pinyin, "character to pinyin TSV", defaults);
    bind(app, "radicals", &RunConfig::radicals, "character to radical TSV", defaults);
    bind(app, "lexicon", &RunConfig::lexicon, "term to translations TSV", defaults);
    bind(app, "index12", &RunConfig::index12, "corpus index for feature 12", defaults);
    bind(app, "index13", &RunConfig::index13, "corpus index for feature 13", defaults);
    bind(app, "seed", &RunConfig::seed, "global seed for the split and the solver", defaults);
    bind(app, "train_fraction", &RunConfig::train_fraction, "train share, e.g. 2/3 or 0.5", defaults);
    bind(app, "c", &RunConfig::c, "SVM regularization constant C > 0", defaults);
    bind(app, "tolerance", &RunConfig::tolerance, "solver stopping tolerance > 0", defaults);
    bind(app, "max_epochs", &RunConfig::max_epochs, "solver epoch limit >= 1", defaults);
    bind(app, "eq5_aggregation", &RunConfig::eq5_aggregation, "set edit distance reduction: max or min", defaults);
    bind(app, "ngd_max", &RunConfig::ngd_max, "value used for infinite web distance", defaults);
    bind(app, "log_m", &RunConfig::log_m, "log10 of the total page count", defaults);
    bind(app, "parallelism", &RunConfig::parallelism, "worker threads, 1..1024", defaults);
    bind(app, "output_dir", &RunConfig::output_dir, "directory for output files", defaults);
    bind(app, "mask", &RunConfig::mask, "comma-separated feature ids", defaults);
  }

  /// defaults, then the config file, then given flags.
  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path_.empty()) {
      std::ifstream in(config_path_, std::ios::binary);
      if (!in) throw UsageError("cannot open config '" + config_path_ + "'");
      try {
        apply_json(cfg, json::parse(in));
      } catch (const std::exception& e) {
        throw UsageError("config '" + config_path_ + "': " + e.what());
      }
    }
    for (const auto& set : setters_) set(cfg);
    return cfg;
  }

 private:
  template <class T>
  void bind(CLI::App* app, const std::string& key, T RunConfig::*field, const std::string& desc,
            const ojson& defaults) {
    auto holder = std::make_shared<T>();
    const auto& d = defaults.at(key);
    CLI::Option* opt = app->add_option(flag_for(key), *holder, desc);
    opt->default_str(d.is_string() ? d.get<std::string>() : d.dump());
    setters_.push_back([opt, holder, field](RunConfig& c) {
      if (opt->count() > 0) c.*field = *holder;
    });
  }

  std::string config_path_;
  std::vector<std::function<void(RunConfig&)>> setters_;
};

RunConfig prepare(const RunOptions& opts, const std::string& command, std::ostream& err) {
  RunConfig cfg = opts.resolve();
  err << "medsyn " << command << " config " << cfg.to_json().dump() << '\n';
  validate(cfg);
  return cfg;
}

int run_features(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  const auto d = load_dataset_file(cfg.dataset);
  const auto bundle = load_bundle(cfg);
  const auto mask = FeatureMask::parse(cfg.mask);
  const auto rows = extract_all(d, bundle, mask, nullptr);
  if (out_path.empty() || out_path == "-") {
    write_feature_tsv(d, rows, mask, out);
  } else {
    auto f = open_out(out_path);
    write_feature_tsv(d, rows, mask, f);
  }
  return kExitOk;
}

int run_train(const RunConfig& cfg, const std::string& model_path, std::ostream& out) {
  const auto d = load_dataset_file(cfg.dataset);
  const auto bundle = load_bundle(cfg);
  const auto mask = FeatureMask::parse(cfg.mask);
  const auto split = split_of(d, cfg);
  const auto train_rows = extract_all(split.train, bundle, mask, nullptr);
  const auto train_labels = split.train.labels();
  const auto model = train_model(train_rows, train_labels, train_config(cfg));
  {
    auto f = open_out(model_path);
    save_model(model, f);
  }
  out << "model\t" << model_path << '\n' << "mask\t" << mask.to_string() << '\n'
      << "train_pairs\t" << split.train.size() << '\n';
  print_metrics(out, score(model, train_rows, train_labels));
  return kExitOk;
}

int run_eval(const RunConfig& cfg, const std::string& model_path, const std::string& features_path,
             std::ostream& out) {
  auto min = open_in(model_path);
  const Model model = load_model(min);
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  if (!features_path.empty()) {
    auto fin = open_in(features_path);
    auto file = read_feature_tsv(fin);
    if (file.mask != model.mask()) {
      throw Error("feature file mask " + file.mask.to_string() + " does not match model mask " +
                  model.mask().to_string());
    }
    rows = std::move(file.rows);
    labels = std::move(file.labels);
  } else {
    const auto d = load_dataset_file(cfg.dataset);
    const auto bundle = load_bundle(cfg);
    const auto split = split_of(d, cfg);
    rows = extract_all(split.test, bundle, model.mask(), nullptr);
    labels = split.test.labels();
  }
  out << "pairs\t" << rows.size() << '\n';
  print_metrics(out, score(model, rows, labels));
  return kExitOk;
}

struct SweepOptions {
  int k = kFeatureCount;
  double top_fraction = 0.1;
  std::size_t top = 10;
  bool singletons = false;
  bool record_timing = false;
};

int run_sweep_command(const RunConfig& cfg, const SweepOptions& so, std::ostream& out,
                      std::ostream& err) {
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = load_dataset_file(cfg.dataset);
  const auto bundle = load_bundle(cfg);
  const auto split = split_of(d, cfg);
  const double load_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const auto train = sweep::extract_table(split.train, bundle, cfg.parallelism);
  const auto test = sweep::extract_table(split.test, bundle, cfg.parallelism);
  const double extract_seconds = seconds_since(t1);

  std::vector<FeatureMask> masks;
  if (so.singletons) {
    for (int i = 1; i <= so.k; ++i) masks.emplace_back(FeatureId(i).bit());
  } else {
    masks = sweep::enumerate_masks(so.k);
  }
  sweep::SweepConfig sc{train_config(cfg), so.record_timing};
  const auto t2 = std::chrono::steady_clock::now();
  auto report = sweep::run_sweep(masks, train, test, sc, cfg.parallelism);
  const double sweep_seconds = seconds_since(t2);

  report.dataset_fingerprint = d.fingerprint();
  report.config["eq5_aggregation"] = cfg.eq5_aggregation;
  report.config["ngd_max"] = cfg.ngd_max;
  report.config["log_m"] = cfg.log_m;
  report.config["train_fraction"] = cfg.train_fraction;
  report.config["k"] = so.k;
  report.config["singletons"] = so.singletons;

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  {
    auto f = open_out(dir / "sweep.tsv");
    sweep::write_report_tsv(report, f);
  }
  {
    auto f = open_out(dir / "sweep.json");
    sweep::write_report_json(report, f);
  }
  const auto considered = static_cast<std::size_t>(std::floor(so.top_fraction * static_cast<double>(report.rows.size())));
  if (considered > 0) {
    auto f = open_out(dir / "frequency.tsv");
    sweep::write_frequency_tsv(sweep::top_fraction_feature_frequency(report.rows, so.top_fraction), f);
  } else {
    err << "frequency.tsv skipped: top fraction of " << report.rows.size() << " rows is empty\n";
  }

  ojson log;
  log["command"] = "sweep";
  log["config"] = cfg.to_json();
  log["sweep"] = {{"k", so.k}, {"singletons", so.singletons}, {"top_fraction", so.top_fraction},
                  {"record_timing", so.record_timing}};
  log["dataset_fingerprint"] = report.dataset_fingerprint;
  log["versions"] = versions();
  log["counts"] = {{"pairs", d.size()}, {"train", split.train.size()}, {"test", split.test.size()},
                   {"masks", masks.size()}};
  ojson missing = ojson::array();
  for (auto m : train.stats.missing) missing.push_back(m);
  log["train_extraction"] = {{"ngd_clamped", train.stats.ngd_clamped},
                             {"ngd_infinite", train.stats.ngd_infinite},
                             {"missing", missing}};
  log["started_at"] = started;
  log["wall_clock_seconds"] = {{"load", load_seconds},
                               {"extract", extract_seconds},
                               {"sweep", sweep_seconds},
                               {"total", seconds_since(t0)}};
  log["nondeterministic_fields"] = {"started_at", "wall_clock_seconds"};
  {
    auto f = open_out(dir / "run-log.json");
    f << log.dump(2) << '\n';
  }

  print_table(out, sweep::top_k_table(report.rows, so.top));
  return kExitOk;
}

int run_report(const std::string& path, std::size_t top, double fraction, std::ostream& out) {
  auto in = open_in(path);
  const auto report = sweep::read_report_tsv(in);
  print_table(out, sweep::top_k_table(report.rows, top));
  const auto freq = sweep::top_fraction_feature_frequency(report.rows, fraction);
  out << "\nfeature_id\tcount\tfraction\n";
  for (int i = 0; i < kFeatureCount; ++i) {
    const auto c = freq.counts[static_cast<std::size_t>(i)];
    out << i + 1 << '\t' << c << '\t'
        << sweep::format_double(static_cast<double>(c) / static_cast<double>(freq.considered)) << '\n';
  }
  return kExitOk;
}

int run_corpus_index(const std::string& corpus, bool lines, const std::string& vocab_path,
                     const std::string& out_path, std::ostream& out) {
  if (!fs::exists(corpus)) throw Error("corpus '" + corpus + "' does not exist");
  const auto docs = web::read_corpus(corpus, lines);
  const auto d = load_dataset_file(vocab_path);
  std::vector<std::string> vocab;
  for (const auto& p : d.pairs()) {
    vocab.push_back(p.a.surface());
    vocab.push_back(p.b.surface());
  }
  const auto index = web::build_corpus_index(docs, vocab);
  {
    auto f = open_out(out_path);
    index.save(f);
  }
  out << "documents\t" << index.total_documents() << '\n'
      << "terms\t" << index.vocabulary_size() << '\n'
      << "pairs\t" << index.pair_count() << '\n';
  return kExitOk;
}

}  // namespace

ojson RunConfig::to_json() const {
  ojson j;
  j["dataset"] = dataset;
  j["zh_embeddings"] = zh_embeddings;
  j["en_embeddings"] = en_embeddings;
  j["pinyin"] = pinyin;
  j["radicals"] = radicals;
  j["lexicon"] = lexicon;
  j["index12"] = index12;
  j["index13"] = index13;
  j["seed"] = seed;
  j["train_fraction"] = train_fraction;
  j["c"] = c;
  j["tolerance"] = tolerance;
  j["max_epochs"] = max_epochs;
  j["eq5_aggregation"] = eq5_aggregation;
  j["ngd_max"] = ngd_max;
  j["log_m"] = log_m;
  j["parallelism"] = parallelism;
  j["output_dir"] = output_dir;
  j["mask"] = mask;
  return j;
}

void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw Error("unknown config key '" + key + "'");
    }
    try {
      if (key == "dataset") value.get_to(cfg.dataset);
      else if (key == "zh_embeddings") value.get_to(cfg.zh_embeddings);
      else if (key == "en_embeddings") value.get_to(cfg.en_embeddings);
      else if (key == "pinyin") value.get_to(cfg.pinyin);
      else if (key == "radicals") value.get_to(cfg.radicals);
      else if (key == "lexicon") value.get_to(cfg.lexicon);
      else if (key == "index12") value.get_to(cfg.index12);
      else if (key == "index13") value.get_to(cfg.index13);
      else if (key == "seed") value.get_to(cfg.seed);
      else if (key == "train_fraction") value.get_to(cfg.train_fraction);
      else if (key == "c") value.get_to(cfg.c);
      else if (key == "tolerance") value.get_to(cfg.tolerance);
      else if (key == "max_epochs") value.get_to(cfg.max_epochs);
      else if (key == "eq5_aggregation") value.get_to(cfg.eq5_aggregation);
      else if (key == "ngd_max") value.get_to(cfg.ngd_max);
      else if (key == "log_m") value.get_to(cfg.log_m);
      else if (key == "parallelism") value.get_to(cfg.parallelism);
      else if (key == "output_dir") value.get_to(cfg.output_dir);
      else if (key == "mask") value.get_to(cfg.mask);
    } catch (const json::exception&) {
      throw Error("config key '" + key + "' has the wrong type");
    }
  }
}

void validate(const RunConfig& cfg) {
  auto positive = [](const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0) throw Error(std::string(name) + " must be a positive finite number");
  };
  positive("c", cfg.c);
  positive("tolerance", cfg.tolerance);
  positive("ngd_max", cfg.ngd_max);
  positive("log_m", cfg.log_m);
  if (cfg.max_epochs < 1) throw Error("max_epochs must be at least 1");
  if (cfg.parallelism < 1 || cfg.parallelism > 1024) throw Error("parallelism must be in [1,1024]");
  Fraction::parse(cfg.train_fraction);
  strfeat::parse_aggregation(cfg.eq5_aggregation);
  FeatureMask::parse(cfg.mask);
  for (const auto* path : {&cfg.dataset, &cfg.zh_embeddings, &cfg.en_embeddings, &cfg.pinyin,
                           &cfg.radicals, &cfg.lexicon, &cfg.index12, &cfg.index13}) {
    if (!path->empty() && !fs::is_regular_file(*path)) throw Error("file '" + *path + "' does not exist");
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chinese/English medical synonym features, classifier and feature-subset sweeps"};
  app.name("medsyn");
  app.require_subcommand(1);
  app.set_version_flag("--version", MEDSYN_VERSION);

  RunOptions features_opts, train_opts, eval_opts, sweep_opts;
  std::string features_out = "-";
  std::string train_model_path, eval_model_path, eval_features;
  SweepOptions so;
  std::string report_path;
  std::size_t report_top = 10;
  double report_fraction = 0.1;
  std::string corpus_path, vocab_path, index_out;
  bool corpus_lines = false;

  auto* features = app.add_subcommand("features", "write the per-pair feature matrix as TSV");
  features_opts.attach(features);
  features->add_option("--out", features_out, "output TSV, - for stdout")->capture_default_str();

  auto* train = app.add_subcommand("train", "fit a model on the train split and save it");
  train_opts.attach(train);
  train->add_option("--model", train_model_path, "output model JSON")->required();

  auto* eval = app.add_subcommand("eval", "score a saved model on a feature TSV or the test split");
  eval_opts.attach(eval);
  eval->add_option("--model", eval_model_path, "model JSON")->required();
  eval->add_option("--features", eval_features, "feature TSV from 'features'; default is the dataset test split");

  auto* sw = app.add_subcommand("sweep", "train and score every non-empty feature mask");
  sweep_opts.attach(sw);
  sw->add_option("--k", so.k, "sweep features 1..k")->check(CLI::Range(1, kFeatureCount))->capture_default_str();
  sw->add_option("--top-fraction", so.top_fraction, "ranked share counted in frequency.tsv")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sw->add_option("--top", so.top, "rows printed from the ranked table")->capture_default_str();
  sw->add_flag("--singletons", so.singletons, "only the k single-feature masks");
  sw->add_flag("--record-timing", so.record_timing, "fill the seconds column (reports stop being byte-stable)");

  auto* report = app.add_subcommand("report", "re-rank a sweep TSV: top-k table and feature frequencies");
  report->add_option("report", report_path, "sweep TSV")->required();
  report->add_option("--top", report_top, "rows in the table")->capture_default_str();
  report->add_option("--fraction", report_fraction, "ranked share counted for frequencies")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  auto* ci = app.add_subcommand("corpus-index", "count document frequencies of dataset terms in a corpus");
  ci->add_option("--corpus", corpus_path, "directory with one document per file, or a file")->required();
  ci->add_flag("--lines", corpus_lines, "treat the corpus file as one document per line");
  ci->add_option("--vocab", vocab_path, "dataset TSV whose terms are indexed")->required();
  ci->add_option("--out", index_out, "output index TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*features) return run_features(prepare(features_opts, "features", err), features_out, out);
    if (*train) return run_train(prepare(train_opts, "train", err), train_model_path, out);
    if (*eval) return run_eval(prepare(eval_opts, "eval", err), eval_model_path, eval_features, out);
    if (*sw) return run_sweep_command(prepare(sweep_opts, "sweep", err), so, out, err);
    if (*report) return run_report(report_path, report_top, report_fraction, out);
    if (*ci) return run_corpus_index(corpus_path, corpus_lines, vocab_path, index_out, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int dispatch(int argc, const char* const* argv) { return dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace medsyn::cli
