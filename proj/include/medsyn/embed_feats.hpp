#pragma once

// Word-vector features: cosine of Chinese term vectors (feature 1), cosine
// of English translation-set averages (feature 2) and Euclidean distance of
// Chinese term vectors (feature 3).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medsyn/core.hpp"
#include "medsyn/resources.hpp"

namespace medsyn::embed {

using TermVector = std::vector<double>;

/// Exact lookup of the surface; otherwise the mean of the vectors of its
/// characters that are in the table; otherwise nullopt.
std::optional<TermVector> lookup_term_vector(const Term& t, const EmbeddingTable& zh_table);

/// Result clamped to [-1, 1]. Throws on a zero vector or length mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Component-wise mean. Throws on an empty list or mixed lengths.
TermVector average_vector(std::span<const TermVector> vs);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Mean over translations of the token-averaged translation vectors.
/// Translations with no known token are skipped.
std::optional<TermVector> translation_set_vector(std::span<const std::string> enlist,
                                                 const EmbeddingTable& en_table);

/// Cosine of the two set vectors, nullopt if either set has no usable vector.
std::optional<double> set_cosine(std::span<const std::string> enlist_a,
                                 std::span<const std::string> enlist_b,
                                 const EmbeddingTable& en_table);

}  // namespace medsyn::embed
