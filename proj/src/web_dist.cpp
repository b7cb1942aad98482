#include "medsyn/web_dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "medsyn/error.hpp"
#include "medsyn/text.hpp"

namespace medsyn::web {

std::string CorpusIndex::pair_key(std::string_view x, std::string_view y) {
  if (y < x) std::swap(x, y);
  std::string key;
  key.reserve(x.size() + y.size() + 1);
  key.append(x);
  key.push_back(kPairSeparator);
  key.append(y);
  return key;
}

std::uint64_t CorpusIndex::document_frequency(std::string_view term) const {
  const auto it = df_.find(std::string(term));
  return it == df_.end() ? 0 : it->second;
}

std::uint64_t CorpusIndex::co_document_frequency(std::string_view x, std::string_view y) const {
  if (x == y) return document_frequency(x);
  const auto it = codf_.find(pair_key(x, y));
  return it == codf_.end() ? 0 : it->second;
}

void CorpusIndex::save(std::ostream& out) const {
  const std::map<std::string, std::uint64_t> df(df_.begin(), df_.end());
  const std::map<std::string, std::uint64_t> codf(codf_.begin(), codf_.end());
  out << "#DF\n";
  for (const auto& [term, n] : df) out << term << '\t' << n << '\n';
  out << "#CODF\n";
  for (const auto& [key, n] : codf) out << key << '\t' << n << '\n';
  out << "#TOTAL\n" << total_ << '\n';
}

CorpusIndex CorpusIndex::load(std::istream& in) {
  enum class Section { None, Df, Codf, Total } section = Section::None;
  CorpusIndex index;
  bool saw_total = false;
  std::string raw;
  std::size_t line_no = 0;
  auto parse_u64 = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError(line_no, "bad count '" + std::string(s) + "'");
    }
    return v;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::chomp(raw);
    if (line.empty()) continue;
    if (line == "#DF") { section = Section::Df; continue; }
    if (line == "#CODF") { section = Section::Codf; continue; }
    if (line == "#TOTAL") { section = Section::Total; continue; }
    switch (section) {
      case Section::None:
        throw ParseError(line_no, "data before any section header");
      case Section::Total:
        index.total_ = parse_u64(line);
        saw_total = true;
        break;
      case Section::Df:
      case Section::Codf: {
        const auto tab = line.rfind('\t');
        if (tab == std::string_view::npos) throw ParseError(line_no, "expected key<TAB>count");
        const std::string key(line.substr(0, tab));
        const auto n = parse_u64(line.substr(tab + 1));
        if (section == Section::Df) {
          index.df_[key] = n;
        } else {
          const auto sep = key.find(kPairSeparator);
          if (sep == std::string::npos) throw ParseError(line_no, "pair key without separator");
          index.codf_[pair_key(key.substr(0, sep), key.substr(sep + 1))] = n;
        }
        break;
      }
    }
  }
  if (!saw_total) throw ParseError(line_no, "missing #TOTAL section");
  for (const auto& [term, n] : index.df_) {
    if (n > index.total_) throw Error("document frequency of '" + term + "' exceeds total");
  }
  return index;
}

CorpusIndex build_corpus_index(std::span<const std::string> documents,
                               std::span<const std::string> vocabulary) {
  if (vocabulary.empty()) throw Error("corpus index needs a non-empty vocabulary");
  std::vector<std::string> vocab(vocabulary.begin(), vocabulary.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  CorpusIndex index;
  for (const auto& term : vocab) index.df_[term] = 0;
  index.total_ = documents.size();

  std::vector<std::size_t> present;
  for (const auto& doc : documents) {
    present.clear();
    for (std::size_t t = 0; t < vocab.size(); ++t) {
      if (!vocab[t].empty() && doc.find(vocab[t]) != std::string::npos) present.push_back(t);
    }
    for (std::size_t i = 0; i < present.size(); ++i) {
      ++index.df_[vocab[present[i]]];
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        ++index.codf_[CorpusIndex::pair_key(vocab[present[i]], vocab[present[j]])];
      }
    }
  }
  return index;
}

std::vector<std::string> read_corpus(const std::filesystem::path& path, bool one_per_line) {
  namespace fs = std::filesystem;
  std::vector<std::string> docs;
  if (one_per_line) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      const auto l = text::chomp(line);
      if (!text::trim(l).empty()) docs.emplace_back(l);
    }
    return docs;
  }
  if (!fs::is_directory(path)) throw Error("corpus path is not a directory: " + path.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back(ss.str());
  }
  return docs;
}

CorpusProvider::CorpusProvider(std::shared_ptr<const CorpusIndex> index, double log_m)
    : index_(std::move(index)), log_m_(log_m) {
  if (!index_) throw Error("corpus provider needs an index");
  if (!(log_m > 0.0) || !std::isfinite(log_m)) throw Error("log M must be positive and finite");
}

std::uint64_t CorpusProvider::hits(std::string_view term) const {
  return index_->document_frequency(term);
}

std::uint64_t CorpusProvider::cohits(std::string_view x, std::string_view y) const {
  return index_->co_document_frequency(x, y);
}

NgdValue ngd(std::string_view x, std::string_view y, const HitCountProvider& p) {
  const std::uint64_t fx = p.hits(x);
  const std::uint64_t fy = p.hits(y);
  if (fx == 0 || fy == 0) return NgdValue::missing();

  const double log_fx = std::log10(static_cast<double>(fx));
  const double log_fy = std::log10(static_cast<double>(fy));
  const double hi = std::max(log_fx, log_fy);
  const double lo = std::min(log_fx, log_fy);
  if (!(p.log_m() > hi)) {
    throw Error("hit count exceeds the total page count (log10 " + std::to_string(hi) +
                " >= log M " + std::to_string(p.log_m()) + ")");
  }

  const std::uint64_t fxy = p.cohits(x, y);
  if (fxy == 0) return NgdValue::infinite();

  const double raw = (hi - std::log10(static_cast<double>(fxy))) / (p.log_m() - lo);
  if (raw < 0.0) return NgdValue::finite(0.0, true);
  return NgdValue::finite(raw);
}

}  // namespace medsyn::web
