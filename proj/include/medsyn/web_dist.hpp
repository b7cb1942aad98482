#pragma once

// Normalized web distance over pluggable hit-count providers (features 12
// and 13), and an offline provider backed by a document-frequency index.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medsyn::web {

/// Stand-in for a search engine: page counts for single terms and pairs.
class HitCountProvider {
 public:
  virtual ~HitCountProvider() = default;

  virtual std::uint64_t hits(std::string_view term) const = 0;
  virtual std::uint64_t cohits(std::string_view x, std::string_view y) const = 0;
  /// log10 of the total page count M.
  virtual double log_m() const = 0;
};

/// Document frequencies of a fixed vocabulary over a corpus.
class CorpusIndex {
 public:
  static constexpr char kPairSeparator = '\x1F';

  CorpusIndex() = default;

  std::uint64_t total_documents() const noexcept { return total_; }
  std::uint64_t document_frequency(std::string_view term) const;
  /// Symmetric; for x == y this is document_frequency(x).
  std::uint64_t co_document_frequency(std::string_view x, std::string_view y) const;

  std::size_t vocabulary_size() const noexcept { return df_.size(); }
  std::size_t pair_count() const noexcept { return codf_.size(); }

  /// Sections #DF, #CODF, #TOTAL; keys sorted for byte-stable output.
  void save(std::ostream& out) const;
  static CorpusIndex load(std::istream& in);

  friend CorpusIndex build_corpus_index(std::span<const std::string> documents,
                                        std::span<const std::string> vocabulary);

 private:
  static std::string pair_key(std::string_view x, std::string_view y);

  std::unordered_map<std::string, std::uint64_t> df_;
  std::unordered_map<std::string, std::uint64_t> codf_;
  std::uint64_t total_ = 0;
};

/// A document contains a term iff the term is a substring of it; repeated
/// occurrences count once. Throws if the vocabulary is empty.
CorpusIndex build_corpus_index(std::span<const std::string> documents,
                               std::span<const std::string> vocabulary);

/// Reads one document per regular file of a directory (sorted by name), or
/// one document per line of a single file.
std::vector<std::string> read_corpus(const std::filesystem::path& path, bool one_per_line);

class CorpusProvider final : public HitCountProvider {
 public:
  CorpusProvider(std::shared_ptr<const CorpusIndex> index, double log_m);

  std::uint64_t hits(std::string_view term) const override;
  std::uint64_t cohits(std::string_view x, std::string_view y) const override;
  double log_m() const override { return log_m_; }

  const CorpusIndex& index() const noexcept { return *index_; }

 private:
  std::shared_ptr<const CorpusIndex> index_;
  double log_m_;
};

struct NgdValue {
  enum class Kind { Finite, Infinite, Missing };

  Kind kind = Kind::Missing;
  double value = 0.0;    // meaningful for Finite only
  bool clamped = false;  // a negative raw value was raised to 0

  static NgdValue finite(double v, bool clamped = false) { return {Kind::Finite, v, clamped}; }
  static NgdValue infinite() { return {Kind::Infinite, 0.0, false}; }
  static NgdValue missing() { return {Kind::Missing, 0.0, false}; }
};

/// Base-10 normalized web distance. Missing when either term has no hits,
/// infinite when they never co-occur. Throws if a hit count exceeds M.
NgdValue ngd(std::string_view x, std::string_view y, const HitCountProvider& p);

}  // namespace medsyn::web
