// Writes a seeded synthetic world plus corpus indexes and a config.json that
// the medsyn CLI can consume directly.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "medsyn/error.hpp"
#include "medsyn/resources.hpp"
#include "medsyn/synthetic.hpp"
#include "medsyn/web_dist.hpp"

#ifndef MEDSYN_DATA_DIR
#define MEDSYN_DATA_DIR "data"
#endif

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic synonym dataset with all feature resources"};
  app.name("medsyn_synth");
  medsyn::synth::SyntheticConfig cfg;
  std::string out_dir;
  std::string data_dir = MEDSYN_DATA_DIR;
  double log_m = 10.0;
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
  app.add_option("--positives", cfg.positives, "positive pairs")->capture_default_str();
  app.add_option("--negatives", cfg.negatives, "negative pairs")->capture_default_str();
  app.add_option("--data-dir", data_dir, "directory holding pinyin.tsv and radicals.tsv")->capture_default_str();
  app.add_option("--log-m", log_m, "log_m written to config.json")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const fs::path data = fs::absolute(data_dir);
    std::ifstream pin(data / "pinyin.tsv"), rin(data / "radicals.tsv");
    if (!pin || !rin) throw medsyn::Error("cannot read tables in '" + data.string() + "'");
    const auto pinyin = medsyn::load_pinyin_table(pin);
    const auto radicals = medsyn::load_radical_table(rin);
    const auto world = medsyn::synth::generate(cfg, pinyin, radicals);

    const fs::path dir = fs::absolute(out_dir);
    fs::create_directories(dir);
    medsyn::synth::write_world(world, dir);
    for (const auto& [name, docs] : {std::pair{"index12.tsv", &world.corpus12}, std::pair{"index13.tsv", &world.corpus13}}) {
      std::ofstream out(dir / name, std::ios::binary);
      medsyn::web::build_corpus_index(*docs, world.vocabulary).save(out);
    }

    nlohmann::ordered_json j;
    j["dataset"] = (dir / "dataset.tsv").string();
    j["zh_embeddings"] = (dir / "zh.vec").string();
    j["en_embeddings"] = (dir / "en.vec").string();
    j["pinyin"] = (data / "pinyin.tsv").string();
    j["radicals"] = (data / "radicals.tsv").string();
    j["lexicon"] = (dir / "lexicon.tsv").string();
    j["index12"] = (dir / "index12.tsv").string();
    j["index13"] = (dir / "index13.tsv").string();
    j["seed"] = cfg.seed;
    j["log_m"] = log_m;
    j["output_dir"] = (dir / "out").string();
    std::ofstream(dir / "config.json") << j.dump(2) << '\n';
    std::cout << "wrote " << world.dataset.size() << " pairs to " << dir.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
