#pragma once

// Seeded generator of a small synonym-identification world: a labelled
// dataset plus every resource the thirteen features read. Positives are
// perturbations of a base term (homophone swap, same-radical substitution,
// small edit) that usually share an English translation; negatives pair the
// base term of one concept with the perturbed term of another. Feature 13's
// corpus is drawn independently of the labels, so that column is noise.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "medsyn/model.hpp"
#include "medsyn/resources.hpp"

namespace medsyn::synth {

struct SyntheticConfig {
  std::size_t positives = 300;
  std::size_t negatives = 300;
  std::uint64_t seed = 1;
  std::size_t zh_dimension = 16;
  std::size_t en_dimension = 16;
};

struct SyntheticWorld {
  Dataset dataset;
  std::shared_ptr<EmbeddingTable> zh_embeddings;
  std::shared_ptr<EmbeddingTable> en_embeddings;
  std::vector<std::string> zh_tokens;  // save order
  std::vector<std::string> en_tokens;
  std::shared_ptr<TranslationLexicon> lexicon;
  std::vector<std::pair<std::string, std::vector<std::string>>> lexicon_rows;
  std::vector<std::string> corpus12;
  std::vector<std::string> corpus13;
  std::vector<std::string> vocabulary;  // every term surface

  /// Indexes both corpora and wires everything into a bundle.
  ResourceBundle bundle(std::shared_ptr<const PinyinTable> pinyin,
                        std::shared_ptr<const RadicalTable> radicals, double log_m = 10.0,
                        strfeat::Aggregation eq5 = strfeat::Aggregation::Max,
                        double ngd_max = 10.0) const;
};

/// Only characters present in both tables are used to build terms.
SyntheticWorld generate(const SyntheticConfig& cfg, const PinyinTable& pinyin,
                        const RadicalTable& radicals);

/// Writes dataset.tsv, zh.vec, en.vec, lexicon.tsv, corpus12.txt and
/// corpus13.txt into dir.
void write_world(const SyntheticWorld& world, const std::filesystem::path& dir);

}  // namespace medsyn::synth
