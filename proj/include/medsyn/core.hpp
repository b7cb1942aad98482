#pragma once

// Domain types shared by every module, plus binary classification metrics.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace medsyn {

inline constexpr int kFeatureCount = 13;

/// One of the thirteen similarity features, numbered 1..13:
///   1 cosine (Chinese vectors)      8 first characters
///   2 cosine (English set averages) 9 abbreviation
///   3 Euclidean distance           10 pinyin edit distance
///   4 relative edit distance (zh)  11 common radicals
///   5 set edit distance (en)       12 web distance, provider 12
///   6 duplicate word               13 web distance, provider 13
///   7 subsequence
class FeatureId {
 public:
  explicit FeatureId(int id);

  int value() const noexcept { return id_; }
  std::size_t index() const noexcept { return static_cast<std::size_t>(id_ - 1); }
  std::uint32_t bit() const noexcept { return 1u << (id_ - 1); }

  /// Short human-readable name, e.g. "pinyin_edit_distance".
  std::string_view name() const noexcept;

  static std::array<FeatureId, kFeatureCount> all();

  auto operator<=>(const FeatureId&) const = default;

 private:
  int id_;
};

/// A non-empty subset of the thirteen features; bit i-1 stands for feature i.
class FeatureMask {
 public:
  static constexpr std::uint32_t kAllBits = (1u << kFeatureCount) - 1;

  explicit FeatureMask(std::uint32_t bits);
  explicit FeatureMask(std::span<const FeatureId> ids);

  static FeatureMask full() { return FeatureMask(kAllBits); }

  /// Parses "1,4,5,11,12" (order and duplicates ignored).
  static FeatureMask parse(std::string_view text);

  std::uint32_t bits() const noexcept { return bits_; }
  bool contains(FeatureId id) const noexcept { return (bits_ & id.bit()) != 0; }
  std::size_t size() const noexcept;

  /// Included features in ascending id order.
  std::vector<FeatureId> features() const;

  /// Comma-joined ids in ascending order: "1,4,5,11,12".
  std::string to_string() const;

  auto operator<=>(const FeatureMask&) const = default;

 private:
  std::uint32_t bits_;
};

enum class Label : int { Negative = -1, Positive = 1 };

inline int sign(Label l) noexcept { return static_cast<int>(l); }

/// A Chinese term with its English translations. Translations keep the order
/// of first occurrence; duplicates are dropped.
class Term {
 public:
  explicit Term(std::string surface, std::vector<std::string> translations = {});

  const std::string& surface() const noexcept { return surface_; }
  const std::vector<std::string>& translations() const noexcept { return translations_; }

  bool operator==(const Term&) const = default;

 private:
  std::string surface_;
  std::vector<std::string> translations_;
};

struct LabeledPair {
  Term a;
  Term b;
  Label label;

  bool operator==(const LabeledPair&) const = default;
};

/// Removes duplicates while preserving the first occurrence of each string.
std::vector<std::string> dedupe_preserving_order(std::vector<std::string> values);

/// Feature values for one pair under an active mask. Every feature of the
/// mask is either present or missing, never both.
class FeatureVector {
 public:
  explicit FeatureVector(FeatureMask mask);

  const FeatureMask& mask() const noexcept { return mask_; }

  void set(FeatureId id, double value);
  void set_missing(FeatureId id);

  bool is_missing(FeatureId id) const;
  std::optional<double> value(FeatureId id) const;

  /// True once every masked feature has been assigned a value or marked missing.
  bool complete() const noexcept { return (present_bits_ | missing_bits_) == mask_.bits(); }

  std::uint32_t missing_bits() const noexcept { return missing_bits_; }

  /// Restriction to a sub-mask of this vector's mask.
  FeatureVector select(FeatureMask sub) const;

 private:
  void check_in_mask(FeatureId id) const;

  FeatureMask mask_;
  std::array<double, kFeatureCount> values_{};
  std::uint32_t present_bits_ = 0;
  std::uint32_t missing_bits_ = 0;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const Metrics&) const = default;
};

ConfusionCounts confusion(std::span<const Label> predictions, std::span<const Label> labels);

/// Precision, recall and F1 with 0/0 taken as 0. Each ratio is a single
/// division of exact integers, so equal rationals give identical doubles.
Metrics compute_metrics(const ConfusionCounts& c);

}  // namespace medsyn
