#pragma once

// Feature assembly, imputation/standardization and the soft-margin linear
// SVM used to classify term pairs.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "medsyn/core.hpp"
#include "medsyn/resources.hpp"
#include "medsyn/string_feats.hpp"
#include "medsyn/web_dist.hpp"

namespace medsyn {

/// Everything feature extraction reads. A null member makes the features
/// that depend on it missing.
struct ResourceBundle {
  std::shared_ptr<const EmbeddingTable> zh_embeddings;
  std::shared_ptr<const EmbeddingTable> en_embeddings;
  std::shared_ptr<const PinyinTable> pinyin;
  std::shared_ptr<const RadicalTable> radicals;
  std::shared_ptr<const TranslationLexicon> lexicon;
  std::shared_ptr<const web::HitCountProvider> provider12;
  std::shared_ptr<const web::HitCountProvider> provider13;
  strfeat::Aggregation eq5_aggregation = strfeat::Aggregation::Max;
  double ngd_max = 10.0;
};

struct ExtractionStats {
  std::uint64_t pairs = 0;
  std::uint64_t ngd_clamped = 0;
  std::uint64_t ngd_infinite = 0;
  std::array<std::uint64_t, kFeatureCount> missing{};

  ExtractionStats& operator+=(const ExtractionStats& o);
};

/// Translations of a term: its own if it has any, else the lexicon's.
std::span<const std::string> translations_of(const Term& t, const ResourceBundle& r);

/// Computes exactly the masked features. Unavailable inputs become missing
/// entries; nothing is thrown for missing data.
FeatureVector extract_features(const Term& a, const Term& b, const ResourceBundle& r,
                               FeatureMask mask, ExtractionStats* stats = nullptr);

inline FeatureVector extract_features(const LabeledPair& p, const ResourceBundle& r,
                                      FeatureMask mask, ExtractionStats* stats = nullptr) {
  return extract_features(p.a, p.b, r, mask, stats);
}

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Per-feature centring and scaling fitted on training rows. Missing values
/// are imputed with the training mean, i.e. standardized to 0.
class Scaler {
 public:
  struct Column {
    double mean = 0.0;
    double stddev = 1.0;
    bool constant = true;

    bool operator==(const Column&) const = default;
  };

  Scaler() : mask_(FeatureMask::full()) {}
  Scaler(FeatureMask mask, std::array<Column, kFeatureCount> columns)
      : mask_(mask), columns_(columns) {}

  const FeatureMask& mask() const noexcept { return mask_; }
  const Column& column(FeatureId id) const { return columns_[id.index()]; }

  double standardize(FeatureId id, std::optional<double> value) const;

  /// Standardized values of the mask's features, ascending id order.
  std::vector<double> transform(const FeatureVector& v) const;
  void transform_into(const FeatureVector& v, std::span<double> out) const;

  /// Same scaler restricted to a sub-mask; columns are independent.
  Scaler select(FeatureMask sub) const;

  bool operator==(const Scaler&) const = default;

 private:
  FeatureMask mask_;
  std::array<Column, kFeatureCount> columns_{};
};

/// Mean over present values; standard deviation (population) of the
/// mean-imputed column. Features missing everywhere or with zero spread are
/// flagged constant. Needs at least two rows sharing one mask.
Scaler fit_scaler(std::span<const FeatureVector> rows);

struct TrainConfig {
  double c = 1.0;
  double tolerance = 1e-3;
  std::uint32_t max_epochs = 1000;
  std::uint64_t seed = 0;

  bool operator==(const TrainConfig&) const = default;
};

struct SvmSolution {
  std::vector<double> weights;
  double bias = 0.0;
  std::uint32_t epochs = 0;
  bool converged = false;
  /// Dual objective after each epoch (the quantity the solver minimizes).
  std::vector<double> objective_history;
};

/// L2-regularized hinge-loss linear SVM, solved by dual coordinate descent
/// with the bias as an extra constant feature. Coordinates are visited in a
/// seeded random order each epoch; single-threaded and bit-reproducible.
SvmSolution train_linear_svm(const DenseMatrix& x, std::span<const Label> y, const TrainConfig& cfg);

/// Primal objective 0.5*(|w|^2 + b^2) + C * sum(hinge).
double primal_objective(const DenseMatrix& x, std::span<const Label> y, std::span<const double> w,
                        double bias, double c);

class Model {
 public:
  Model(FeatureMask mask, std::vector<double> weights, double bias, Scaler scaler, TrainConfig config);

  const FeatureMask& mask() const noexcept { return mask_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  const Scaler& scaler() const noexcept { return scaler_; }
  const TrainConfig& training_config() const noexcept { return config_; }

  /// weights . standardized(v) + bias. Throws on a mask mismatch.
  double decision_value(const FeatureVector& v) const;
  /// Positive when the decision value is >= 0.
  Label predict(const FeatureVector& v) const;

  bool operator==(const Model&) const = default;

 private:
  FeatureMask mask_;
  std::vector<double> weights_;
  double bias_;
  Scaler scaler_;
  TrainConfig config_;
};

inline Label label_for_decision(double decision) {
  return decision >= 0.0 ? Label::Positive : Label::Negative;
}

/// fit_scaler + standardize + train_linear_svm. Throws on single-class input.
Model train_model(std::span<const FeatureVector> rows, std::span<const Label> labels,
                  const TrainConfig& cfg);

/// JSON, format version 1. Doubles use shortest round-trip formatting, so
/// save followed by load reproduces every bit.
void save_model(const Model& m, std::ostream& out);
Model load_model(std::istream& in);

}  // namespace medsyn
