#include "medsyn/core.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <unordered_set>

#include "medsyn/error.hpp"
#include "medsyn/text.hpp"

namespace medsyn {

FeatureId::FeatureId(int id) : id_(id) {
  if (id < 1 || id > kFeatureCount) {
    throw Error("feature id out of range [1,13]: " + std::to_string(id));
  }
}

std::string_view FeatureId::name() const noexcept {
  static constexpr std::array<std::string_view, kFeatureCount> kNames = {
      "cosine_zh",          "cosine_en_sets",     "euclidean_zh",
      "edit_distance_zh",   "set_edit_distance_en", "duplicate_word",
      "subsequence",        "first_characters",   "abbreviation",
      "pinyin_edit_distance", "common_radicals",  "web_distance_12",
      "web_distance_13"};
  return kNames[index()];
}

std::array<FeatureId, kFeatureCount> FeatureId::all() {
  return {FeatureId(1), FeatureId(2),  FeatureId(3),  FeatureId(4),  FeatureId(5),
          FeatureId(6), FeatureId(7),  FeatureId(8),  FeatureId(9),  FeatureId(10),
          FeatureId(11), FeatureId(12), FeatureId(13)};
}

FeatureMask::FeatureMask(std::uint32_t bits) : bits_(bits) {
  if (bits == 0) throw Error("feature mask must not be empty");
  if ((bits & ~kAllBits) != 0) throw Error("feature mask has bits beyond feature 13");
}

static std::uint32_t bits_of(std::span<const FeatureId> ids) {
  std::uint32_t bits = 0;
  for (const auto& id : ids) bits |= id.bit();
  return bits;
}

FeatureMask::FeatureMask(std::span<const FeatureId> ids) : FeatureMask(bits_of(ids)) {}

FeatureMask FeatureMask::parse(std::string_view text) {
  std::vector<FeatureId> ids;
  for (const auto& field : text::split(text, ",")) {
    const auto t = text::trim(field);
    int id = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), id);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw Error("bad feature id '" + std::string(t) + "' in mask '" + std::string(text) + "'");
    }
    ids.emplace_back(id);
  }
  return FeatureMask(std::span<const FeatureId>(ids));
}

std::size_t FeatureMask::size() const noexcept {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<FeatureId> FeatureMask::features() const {
  std::vector<FeatureId> out;
  for (const auto& id : FeatureId::all()) {
    if (contains(id)) out.push_back(id);
  }
  return out;
}

std::string FeatureMask::to_string() const {
  std::string out;
  for (const auto& id : features()) {
    if (!out.empty()) out += ',';
    out += std::to_string(id.value());
  }
  return out;
}

std::vector<std::string> dedupe_preserving_order(std::vector<std::string> values) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  out.reserve(values.size());
  for (auto& v : values) {
    if (seen.insert(v).second) out.push_back(std::move(v));
  }
  return out;
}

Term::Term(std::string surface, std::vector<std::string> translations)
    : surface_(std::move(surface)), translations_(dedupe_preserving_order(std::move(translations))) {
  if (surface_.empty()) throw Error("term surface must be non-empty");
  if (!text::is_valid_utf8(surface_)) throw Error("term surface is not valid UTF-8");
  std::erase_if(translations_, [](const std::string& t) { return text::trim(t).empty(); });
}

FeatureVector::FeatureVector(FeatureMask mask) : mask_(mask) {}

void FeatureVector::check_in_mask(FeatureId id) const {
  if (!mask_.contains(id)) {
    throw Error("feature " + std::to_string(id.value()) + " is not in mask " + mask_.to_string());
  }
}

void FeatureVector::set(FeatureId id, double value) {
  check_in_mask(id);
  values_[id.index()] = value;
  present_bits_ |= id.bit();
  missing_bits_ &= ~id.bit();
}

void FeatureVector::set_missing(FeatureId id) {
  check_in_mask(id);
  values_[id.index()] = 0.0;
  missing_bits_ |= id.bit();
  present_bits_ &= ~id.bit();
}

bool FeatureVector::is_missing(FeatureId id) const {
  check_in_mask(id);
  return (missing_bits_ & id.bit()) != 0;
}

std::optional<double> FeatureVector::value(FeatureId id) const {
  check_in_mask(id);
  if ((present_bits_ & id.bit()) == 0) return std::nullopt;
  return values_[id.index()];
}

FeatureVector FeatureVector::select(FeatureMask sub) const {
  if ((sub.bits() & ~mask_.bits()) != 0) {
    throw Error("mask " + sub.to_string() + " is not a subset of " + mask_.to_string());
  }
  FeatureVector out(sub);
  out.values_ = values_;
  out.present_bits_ = present_bits_ & sub.bits();
  out.missing_bits_ = missing_bits_ & sub.bits();
  return out;
}

ConfusionCounts confusion(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size()) {
    throw Error("confusion: " + std::to_string(predictions.size()) + " predictions vs " +
                std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) throw Error("confusion: empty input");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred = predictions[i] == Label::Positive;
    const bool gold = labels[i] == Label::Positive;
    if (pred && gold) ++c.tp;
    else if (pred) ++c.fp;
    else if (gold) ++c.fn;
    else ++c.tn;
  }
  return c;
}

static double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Metrics compute_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error("compute_metrics: no evaluated pairs");
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  // 2PR/(P+R) simplifies to 2tp/(2tp+fp+fn); zero when tp is zero.
  m.f1 = c.tp == 0 ? 0.0 : ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return m;
}

}  // namespace medsyn
