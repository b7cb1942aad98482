#pragma once

// Exhaustive feature-subset experiments: enumerate masks, train and score
// each on a shared split, rank by F1, and summarize.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "medsyn/core.hpp"
#include "medsyn/model.hpp"
#include "medsyn/resources.hpp"

namespace medsyn::sweep {

/// All 2^k - 1 non-empty subsets of features 1..k, ascending by bitmask.
std::vector<FeatureMask> enumerate_masks(int k);

struct SweepConfig {
  /// train.seed is the global seed; each mask trains with a derived seed.
  TrainConfig train;
  /// When false, train_seconds is recorded as 0 so reports are byte-stable.
  bool record_timing = false;
};

/// Seed for one mask, a pure function of the global seed and the bitmask.
std::uint64_t mask_seed(std::uint64_t global_seed, FeatureMask mask);

struct SweepRow {
  FeatureMask mask;
  Metrics metrics;
  double train_seconds = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string dataset_fingerprint;
};

/// Full 13-feature rows of a dataset, extracted once and shared by every
/// mask of a sweep.
struct FeatureTable {
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  ExtractionStats stats;
};

FeatureTable extract_table(const Dataset& d, const ResourceBundle& bundle,
                           std::size_t parallelism = 1);

/// Extract under the mask, fit the scaler on train, train, score the test set.
SweepRow run_single(FeatureMask mask, const Dataset& train, const Dataset& test,
                    const ResourceBundle& bundle, const SweepConfig& config);

/// One row per mask, in input order. Identical for every parallelism.
SweepReport run_sweep(std::span<const FeatureMask> masks, const Dataset& train,
                      const Dataset& test, const ResourceBundle& bundle,
                      const SweepConfig& config, std::size_t parallelism = 1);

/// Same as run_sweep over pre-extracted full-feature tables.
SweepReport run_sweep(std::span<const FeatureMask> masks, const FeatureTable& train,
                      const FeatureTable& test, const SweepConfig& config,
                      std::size_t parallelism = 1);

/// Descending F1, then precision, then recall; ascending bitmask last.
bool ranks_before(const SweepRow& a, const SweepRow& b);
std::vector<SweepRow> rank(std::span<const SweepRow> rows);

struct FeatureFrequency {
  std::size_t considered = 0;
  std::array<std::size_t, kFeatureCount> counts{};
};

/// Counts feature occurrences in the first floor(fraction * rows) ranked
/// rows. Throws when that is zero rows or fraction is outside (0, 1].
FeatureFrequency top_fraction_feature_frequency(std::span<const SweepRow> rows, double fraction);

std::vector<SweepRow> top_k_table(std::span<const SweepRow> rows, std::size_t k);

struct StabilityResult {
  std::vector<Metrics> runs;
  Metrics mean;
  Metrics stddev;  // sample standard deviation
};

/// Re-splits the dataset with every seed, trains the mask and scores it.
/// Needs at least two distinct seeds.
StabilityResult stability_runs(FeatureMask mask, const Dataset& dataset,
                               const ResourceBundle& bundle, const SweepConfig& config,
                               Fraction train_fraction, std::span<const std::uint64_t> seeds);

/// bitmask \t features \t precision \t recall \t f1 \t seconds, with header.
void write_report_tsv(const SweepReport& report, std::ostream& out);
SweepReport read_report_tsv(std::istream& in);
/// Config snapshot and dataset fingerprint.
void write_report_json(const SweepReport& report, std::ostream& out);
/// feature_id \t count \t fraction, with header.
void write_frequency_tsv(const FeatureFrequency& freq, std::ostream& out);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace medsyn::sweep
