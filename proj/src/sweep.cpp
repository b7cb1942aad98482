#include "medsyn/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "medsyn/error.hpp"
#include "medsyn/parallel.hpp"
#include "medsyn/random.hpp"
#include "medsyn/text.hpp"

namespace medsyn::sweep {

std::vector<FeatureMask> enumerate_masks(int k) {
  if (k < 1 || k > kFeatureCount) {
    throw Error("feature count must be in [1,13], got " + std::to_string(k));
  }
  std::vector<FeatureMask> masks;
  const std::uint32_t limit = 1u << k;
  masks.reserve(limit - 1);
  // bits == 0 is the empty mask and is never evaluated
  for (std::uint32_t bits = 1; bits < limit; ++bits) masks.emplace_back(bits);
  return masks;
}

std::uint64_t mask_seed(std::uint64_t global_seed, FeatureMask mask) {
  return derive_seed(global_seed, mask.bits());
}

namespace {

using Clock = std::chrono::steady_clock;

struct Standardized {
  DenseMatrix train;
  DenseMatrix test;
  std::vector<Label> train_labels;
  std::vector<Label> test_labels;
};

DenseMatrix standardize_rows(const Scaler& scaler, std::span<const FeatureVector> rows) {
  DenseMatrix m(rows.size(), scaler.mask().size());
  for (std::size_t i = 0; i < rows.size(); ++i) scaler.transform_into(rows[i], m.row(i));
  return m;
}

DenseMatrix select_columns(const DenseMatrix& full, FeatureMask mask) {
  const auto ids = mask.features();
  DenseMatrix out(full.rows, ids.size());
  for (std::size_t i = 0; i < full.rows; ++i) {
    const auto src = full.row(i);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < ids.size(); ++k) dst[k] = src[ids[k].index()];
  }
  return out;
}

Metrics score(const DenseMatrix& test, std::span<const Label> labels, const SvmSolution& sol) {
  std::vector<Label> predictions(test.rows);
  for (std::size_t i = 0; i < test.rows; ++i) {
    const auto row = test.row(i);
    double dec = sol.bias;
    for (std::size_t j = 0; j < row.size(); ++j) dec += sol.weights[j] * row[j];
    predictions[i] = label_for_decision(dec);
  }
  return compute_metrics(confusion(predictions, labels));
}

SweepRow evaluate(FeatureMask mask, const DenseMatrix& train, std::span<const Label> train_labels,
                  const DenseMatrix& test, std::span<const Label> test_labels,
                  const SweepConfig& config) {
  TrainConfig cfg = config.train;
  cfg.seed = mask_seed(config.train.seed, mask);
  SweepRow row{mask, {}, 0.0, cfg.seed};
  try {
    const auto start = Clock::now();
    const auto sol = train_linear_svm(train, train_labels, cfg);
    const auto stop = Clock::now();
    row.metrics = score(test, test_labels, sol);
    if (config.record_timing) row.train_seconds = std::chrono::duration<double>(stop - start).count();
  } catch (const std::exception& e) {
    throw Error("mask " + mask.to_string() + ": " + e.what());
  }
  return row;
}

nlohmann::ordered_json config_snapshot(const SweepConfig& config) {
  nlohmann::ordered_json j;
  j["C"] = config.train.c;
  j["tolerance"] = config.train.tolerance;
  j["max_epochs"] = config.train.max_epochs;
  j["seed"] = config.train.seed;
  j["record_timing"] = config.record_timing;
  return j;
}

}  // namespace

FeatureTable extract_table(const Dataset& d, const ResourceBundle& bundle, std::size_t parallelism) {
  FeatureTable table;
  table.labels = d.labels();
  std::vector<std::optional<FeatureVector>> rows(d.size());
  std::vector<ExtractionStats> stats(d.size());
  parallel_for(d.size(), parallelism, [&](std::size_t i) {
    rows[i] = extract_features(d.pairs()[i], bundle, FeatureMask::full(), &stats[i]);
  });
  table.rows.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    table.rows.push_back(std::move(*rows[i]));
    table.stats += stats[i];
  }
  return table;
}

SweepRow run_single(FeatureMask mask, const Dataset& train, const Dataset& test,
                    const ResourceBundle& bundle, const SweepConfig& config) {
  std::vector<FeatureVector> train_rows, test_rows;
  for (const auto& p : train.pairs()) train_rows.push_back(extract_features(p, bundle, mask));
  for (const auto& p : test.pairs()) test_rows.push_back(extract_features(p, bundle, mask));
  Scaler scaler;
  try {
    scaler = fit_scaler(train_rows);
  } catch (const std::exception& e) {
    throw Error("mask " + mask.to_string() + ": " + e.what());
  }
  return evaluate(mask, standardize_rows(scaler, train_rows), train.labels(),
                  standardize_rows(scaler, test_rows), test.labels(), config);
}

SweepReport run_sweep(std::span<const FeatureMask> masks, const FeatureTable& train,
                      const FeatureTable& test, const SweepConfig& config,
                      std::size_t parallelism) {
  if (masks.empty()) throw Error("run_sweep needs at least one mask");
  {
    std::set<std::uint32_t> unique;
    for (const auto& m : masks) {
      if (!unique.insert(m.bits()).second) throw Error("duplicate mask " + m.to_string());
    }
  }
  // Columns are scaled independently, so one full-width fit serves every mask.
  const Scaler scaler = fit_scaler(train.rows);
  const DenseMatrix train_full = standardize_rows(scaler, train.rows);
  const DenseMatrix test_full = standardize_rows(scaler, test.rows);

  SweepReport report;
  report.config = config_snapshot(config);
  report.rows.assign(masks.size(), SweepRow{FeatureMask::full(), {}, 0.0, 0});
  parallel_for(masks.size(), parallelism, [&](std::size_t i) {
    report.rows[i] = evaluate(masks[i], select_columns(train_full, masks[i]), train.labels,
                              select_columns(test_full, masks[i]), test.labels, config);
  });
  return report;
}

SweepReport run_sweep(std::span<const FeatureMask> masks, const Dataset& train,
                      const Dataset& test, const ResourceBundle& bundle,
                      const SweepConfig& config, std::size_t parallelism) {
  const auto train_table = extract_table(train, bundle, parallelism);
  const auto test_table = extract_table(test, bundle, parallelism);
  auto report = run_sweep(masks, train_table, test_table, config, parallelism);
  report.config["eq5_aggregation"] = std::string(strfeat::to_string(bundle.eq5_aggregation));
  report.config["ngd_max"] = bundle.ngd_max;
  std::vector<LabeledPair> all(train.pairs());
  all.insert(all.end(), test.pairs().begin(), test.pairs().end());
  report.dataset_fingerprint = Dataset(std::move(all)).fingerprint();
  return report;
}

bool ranks_before(const SweepRow& a, const SweepRow& b) {
  if (a.metrics.f1 != b.metrics.f1) return a.metrics.f1 > b.metrics.f1;
  if (a.metrics.precision != b.metrics.precision) return a.metrics.precision > b.metrics.precision;
  if (a.metrics.recall != b.metrics.recall) return a.metrics.recall > b.metrics.recall;
  return a.mask.bits() < b.mask.bits();
}

std::vector<SweepRow> rank(std::span<const SweepRow> rows) {
  std::vector<SweepRow> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

FeatureFrequency top_fraction_feature_frequency(std::span<const SweepRow> rows, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error("fraction must lie in (0, 1], got " + format_double(fraction));
  }
  if (rows.empty()) throw Error("frequency analysis of an empty report");
  FeatureFrequency freq;
  freq.considered = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(rows.size())));
  if (freq.considered == 0) {
    throw Error("fraction " + format_double(fraction) + " of " + std::to_string(rows.size()) +
                " rows selects no rows");
  }
  const auto ranked = rank(rows);
  for (std::size_t i = 0; i < freq.considered; ++i) {
    for (const auto& id : ranked[i].mask.features()) ++freq.counts[id.index()];
  }
  return freq;
}

std::vector<SweepRow> top_k_table(std::span<const SweepRow> rows, std::size_t k) {
  if (k == 0) throw Error("top-k table needs k >= 1");
  auto ranked = rank(rows);
  if (ranked.size() > k) ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  return ranked;
}

StabilityResult stability_runs(FeatureMask mask, const Dataset& dataset,
                               const ResourceBundle& bundle, const SweepConfig& config,
                               Fraction train_fraction, std::span<const std::uint64_t> seeds) {
  if (seeds.size() < 2) throw Error("stability runs need at least 2 seeds");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw Error("stability runs need distinct seeds");
  }
  StabilityResult result;
  for (const auto seed : seeds) {
    const auto split = split_train_test(dataset, SplitConfig{train_fraction, seed, true});
    SweepConfig run_config = config;
    run_config.train.seed = seed;
    result.runs.push_back(run_single(mask, split.train, split.test, bundle, run_config).metrics);
  }
  const double n = static_cast<double>(result.runs.size());
  auto summarize = [&](double Metrics::*field, double& mean, double& sd) {
    double sum = 0.0;
    for (const auto& m : result.runs) sum += m.*field;
    mean = sum / n;
    double ss = 0.0;
    for (const auto& m : result.runs) ss += (m.*field - mean) * (m.*field - mean);
    sd = std::sqrt(ss / (n - 1.0));
  };
  summarize(&Metrics::precision, result.mean.precision, result.stddev.precision);
  summarize(&Metrics::recall, result.mean.recall, result.stddev.recall);
  summarize(&Metrics::f1, result.mean.f1, result.stddev.f1);
  return result;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

static constexpr std::string_view kReportHeader = "bitmask\tfeatures\tprecision\trecall\tf1\tseconds";

void write_report_tsv(const SweepReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.mask.bits() << '\t' << r.mask.to_string() << '\t' << format_double(r.metrics.precision)
        << '\t' << format_double(r.metrics.recall) << '\t' << format_double(r.metrics.f1) << '\t'
        << format_double(r.train_seconds) << '\n';
  }
}

SweepReport read_report_tsv(std::istream& in) {
  SweepReport report;
  std::string raw;
  std::size_t line_no = 0;
  std::set<std::uint32_t> seen;
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError(line_no, "bad number '" + std::string(s) + "'");
    }
    return v;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::chomp(raw);
    if (line.empty() || line == kReportHeader) continue;
    const auto f = text::split(line, "\t");
    if (f.size() != 6) throw ParseError(line_no, "expected 6 columns, got " + std::to_string(f.size()));
    std::uint32_t bits = 0;
    const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), bits);
    if (ec != std::errc() || ptr != f[0].data() + f[0].size()) throw ParseError(line_no, "bad bitmask");
    try {
      const FeatureMask mask(bits);
      if (FeatureMask::parse(f[1]) != mask) throw ParseError(line_no, "features disagree with bitmask");
      if (!seen.insert(bits).second) throw ParseError(line_no, "duplicate mask " + f[1]);
      SweepRow row{mask, {number(f[2]), number(f[3]), number(f[4])}, number(f[5]), 0};
      for (double m : {row.metrics.precision, row.metrics.recall, row.metrics.f1}) {
        if (!(m >= 0.0 && m <= 1.0)) throw ParseError(line_no, "metric outside [0,1]");
      }
      report.rows.push_back(row);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return report;
}

void write_report_json(const SweepReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["format"] = "medsyn-sweep";
  j["version"] = 1;
  j["rows"] = report.rows.size();
  j["dataset_fingerprint"] = report.dataset_fingerprint;
  j["config"] = report.config;
  out << j.dump(2) << '\n';
}

void write_frequency_tsv(const FeatureFrequency& freq, std::ostream& out) {
  out << "feature_id\tcount\tfraction\n";
  for (const auto& id : FeatureId::all()) {
    const auto count = freq.counts[id.index()];
    out << id.value() << '\t' << count << '\t'
        << format_double(static_cast<double>(count) / static_cast<double>(freq.considered)) << '\n';
  }
}

}  // namespace medsyn::sweep
