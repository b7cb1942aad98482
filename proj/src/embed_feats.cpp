#include "medsyn/embed_feats.hpp"

#include <algorithm>
#include <cmath>

#include "medsyn/error.hpp"
#include "medsyn/text.hpp"

namespace medsyn::embed {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("vector length mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  }
}

std::optional<TermVector> mean_of(const std::vector<const std::vector<double>*>& found) {
  if (found.empty()) return std::nullopt;
  TermVector sum(found.front()->size(), 0.0);
  for (const auto* v : found) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
  }
  const double n = static_cast<double>(found.size());
  for (double& x : sum) x /= n;
  return sum;
}

}  // namespace

std::optional<TermVector> lookup_term_vector(const Term& t, const EmbeddingTable& zh_table) {
  if (const auto* v = zh_table.find(t.surface())) return *v;
  std::vector<const std::vector<double>*> found;
  for (char32_t ch : text::decode_utf8(t.surface())) {
    if (const auto* v = zh_table.find(text::encode_utf8(ch))) found.push_back(v);
  }
  return mean_of(found);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error("cosine similarity of a zero vector is undefined");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

TermVector average_vector(std::span<const TermVector> vs) {
  if (vs.empty()) throw Error("average of an empty vector list");
  std::vector<const std::vector<double>*> ptrs;
  ptrs.reserve(vs.size());
  for (const auto& v : vs) {
    if (v.size() != vs.front().size()) throw Error("average of vectors with mixed lengths");
    ptrs.push_back(&v);
  }
  return *mean_of(ptrs);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::optional<TermVector> translation_set_vector(std::span<const std::string> enlist,
                                                 const EmbeddingTable& en_table) {
  std::vector<TermVector> per_translation;
  for (const auto& translation : enlist) {
    std::vector<const std::vector<double>*> found;
    for (const auto& token : text::split_whitespace(translation)) {
      const auto* v = en_table.find(token);
      if (v == nullptr) v = en_table.find(text::ascii_lower(token));
      if (v != nullptr) found.push_back(v);
    }
    if (auto avg = mean_of(found)) per_translation.push_back(std::move(*avg));
  }
  if (per_translation.empty()) return std::nullopt;
  return average_vector(per_translation);
}

std::optional<double> set_cosine(std::span<const std::string> enlist_a,
                                 std::span<const std::string> enlist_b,
                                 const EmbeddingTable& en_table) {
  const auto va = translation_set_vector(enlist_a, en_table);
  const auto vb = translation_set_vector(enlist_b, en_table);
  if (!va || !vb) return std::nullopt;
  auto is_zero = [](const TermVector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  if (is_zero(*va) || is_zero(*vb)) return std::nullopt;
  return cosine_similarity(*va, *vb);
}

}  // namespace medsyn::embed
