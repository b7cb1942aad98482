#pragma once

// Command-line front end: features, train, eval, sweep, report and
// corpus-index subcommands over one JSON config plus flag overrides.

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "medsyn/core.hpp"
#include "medsyn/resources.hpp"
#include "medsyn/string_feats.hpp"

namespace medsyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Resource paths and run parameters. Empty resource paths leave the
/// corresponding features missing.
struct RunConfig {
  std::string dataset;
  std::string zh_embeddings;
  std::string en_embeddings;
  std::string pinyin;
  std::string radicals;
  std::string lexicon;
  std::string index12;
  std::string index13;
  std::uint64_t seed = 0;
  std::string train_fraction = "2/3";
  double c = 1.0;
  double tolerance = 1e-3;
  std::uint32_t max_epochs = 1000;
  std::string eq5_aggregation = "max";
  double ngd_max = 10.0;
  double log_m = 10.0;
  std::size_t parallelism = 1;
  std::string output_dir = ".";
  std::string mask = "1,2,3,4,5,6,7,8,9,10,11,12,13";

  nlohmann::ordered_json to_json() const;
};

/// Applies the keys of a config object. Unknown keys are rejected.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

/// Numeric ranges, parseable fields and existence of the referenced files.
void validate(const RunConfig& cfg);

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace medsyn::cli
