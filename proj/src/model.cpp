#include "medsyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "medsyn/embed_feats.hpp"
#include "medsyn/error.hpp"
#include "medsyn/random.hpp"
#include "medsyn/zh_feats.hpp"

namespace medsyn {

ExtractionStats& ExtractionStats::operator+=(const ExtractionStats& o) {
  pairs += o.pairs;
  ngd_clamped += o.ngd_clamped;
  ngd_infinite += o.ngd_infinite;
  for (std::size_t i = 0; i < missing.size(); ++i) missing[i] += o.missing[i];
  return *this;
}

std::span<const std::string> translations_of(const Term& t, const ResourceBundle& r) {
  if (!t.translations().empty() || !r.lexicon) return t.translations();
  if (const auto* found = r.lexicon->find(t.surface())) return *found;
  return {};
}

namespace {

std::optional<double> from_bool(std::optional<bool> b) {
  if (!b) return std::nullopt;
  return *b ? 1.0 : 0.0;
}

std::optional<double> web_feature(const Term& a, const Term& b, const web::HitCountProvider* p,
                                  double cap, ExtractionStats* stats) {
  if (p == nullptr) return std::nullopt;
  const auto d = web::ngd(a.surface(), b.surface(), *p);
  switch (d.kind) {
    case web::NgdValue::Kind::Missing:
      return std::nullopt;
    case web::NgdValue::Kind::Infinite:
      if (stats) ++stats->ngd_infinite;
      return cap;
    case web::NgdValue::Kind::Finite:
      if (stats && d.clamped) ++stats->ngd_clamped;
      return std::min(d.value, cap);
  }
  return std::nullopt;
}

}  // namespace

FeatureVector extract_features(const Term& a, const Term& b, const ResourceBundle& r,
                               FeatureMask mask, ExtractionStats* stats) {
  FeatureVector out(mask);
  if (stats) ++stats->pairs;

  // Chinese term vectors are shared by features 1 and 3.
  std::optional<embed::TermVector> va, vb;
  const bool need_zh_vectors = mask.contains(FeatureId(1)) || mask.contains(FeatureId(3));
  if (need_zh_vectors && r.zh_embeddings) {
    va = embed::lookup_term_vector(a, *r.zh_embeddings);
    vb = embed::lookup_term_vector(b, *r.zh_embeddings);
  }
  const auto ta = translations_of(a, r);
  const auto tb = translations_of(b, r);

  auto compute = [&](int id) -> std::optional<double> {
    switch (id) {
      case 1: {
        if (!va || !vb) return std::nullopt;
        const auto nonzero = [](const embed::TermVector& v) {
          return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
        };
        if (!nonzero(*va) || !nonzero(*vb)) return std::nullopt;
        return embed::cosine_similarity(*va, *vb);
      }
      case 2:
        if (!r.en_embeddings) return std::nullopt;
        return embed::set_cosine(ta, tb, *r.en_embeddings);
      case 3:
        if (!va || !vb) return std::nullopt;
        return embed::euclidean_distance(*va, *vb);
      case 4:
        return strfeat::relative_edit_distance(a.surface(), b.surface());
      case 5:
        return strfeat::set_edit_distance(ta, tb, r.eq5_aggregation);
      case 6:
        return from_bool(strfeat::duplicate_word(ta, tb));
      case 7:
        return from_bool(strfeat::subsequence(ta, tb));
      case 8:
        return from_bool(strfeat::first_characters_match(ta, tb));
      case 9:
        return from_bool(strfeat::abbreviation_match(ta, tb));
      case 10:
        if (!r.pinyin) return std::nullopt;
        return zh::pinyin_edit_distance(a, b, *r.pinyin);
      case 11:
        if (!r.radicals) return std::nullopt;
        return zh::common_radicals(a, b, *r.radicals);
      case 12:
        return web_feature(a, b, r.provider12.get(), r.ngd_max, stats);
      case 13:
        return web_feature(a, b, r.provider13.get(), r.ngd_max, stats);
    }
    return std::nullopt;
  };

  for (const auto& id : mask.features()) {
    if (const auto v = compute(id.value())) {
      out.set(id, *v);
    } else {
      out.set_missing(id);
      if (stats) ++stats->missing[id.index()];
    }
  }
  return out;
}

double Scaler::standardize(FeatureId id, std::optional<double> value) const {
  if (!value) return 0.0;
  const auto& c = columns_[id.index()];
  const double centred = *value - c.mean;
  return c.constant ? centred : centred / c.stddev;
}

void Scaler::transform_into(const FeatureVector& v, std::span<double> out) const {
  if (v.mask() != mask_) {
    throw Error("feature mask " + v.mask().to_string() + " does not match scaler mask " +
                mask_.to_string());
  }
  std::size_t k = 0;
  for (const auto& id : mask_.features()) out[k++] = standardize(id, v.value(id));
}

std::vector<double> Scaler::transform(const FeatureVector& v) const {
  std::vector<double> out(mask_.size());
  transform_into(v, out);
  return out;
}

Scaler Scaler::select(FeatureMask sub) const {
  if ((sub.bits() & ~mask_.bits()) != 0) {
    throw Error("mask " + sub.to_string() + " is not a subset of " + mask_.to_string());
  }
  return Scaler(sub, columns_);
}

Scaler fit_scaler(std::span<const FeatureVector> rows) {
  if (rows.size() < 2) throw Error("fit_scaler needs at least 2 rows, got " + std::to_string(rows.size()));
  const FeatureMask mask = rows.front().mask();
  for (const auto& r : rows) {
    if (r.mask() != mask) throw Error("fit_scaler: rows have different feature masks");
  }
  std::array<Scaler::Column, kFeatureCount> columns{};
  const double n = static_cast<double>(rows.size());
  for (const auto& id : mask.features()) {
    double sum = 0.0;
    std::size_t present = 0;
    for (const auto& r : rows) {
      if (const auto v = r.value(id)) {
        sum += *v;
        ++present;
      }
    }
    auto& col = columns[id.index()];
    if (present == 0) {
      col = {0.0, 1.0, true};
      continue;
    }
    col.mean = sum / static_cast<double>(present);
    // Imputed entries sit at the mean and add nothing to the squared sum.
    double ss = 0.0;
    for (const auto& r : rows) {
      if (const auto v = r.value(id)) ss += (*v - col.mean) * (*v - col.mean);
    }
    const double sd = std::sqrt(ss / n);
    if (sd <= 1e-12 * std::max(1.0, std::abs(col.mean))) {
      col.stddev = 1.0;
      col.constant = true;
    } else {
      col.stddev = sd;
      col.constant = false;
    }
  }
  return Scaler(mask, columns);
}

double primal_objective(const DenseMatrix& x, std::span<const Label> y, std::span<const double> w,
                        double bias, double c) {
  double reg = bias * bias;
  for (double wj : w) reg += wj * wj;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = x.row(i);
    const double dec = std::inner_product(row.begin(), row.end(), w.begin(), bias);
    loss += std::max(0.0, 1.0 - sign(y[i]) * dec);
  }
  return 0.5 * reg + c * loss;
}

SvmSolution train_linear_svm(const DenseMatrix& x, std::span<const Label> y, const TrainConfig& cfg) {
  if (x.rows != y.size()) throw Error("training matrix and label counts differ");
  if (!(cfg.c > 0.0) || !(cfg.tolerance > 0.0) || cfg.max_epochs == 0) {
    throw Error("training config needs C > 0, tolerance > 0 and max_epochs > 0");
  }
  const bool has_pos = std::find(y.begin(), y.end(), Label::Positive) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), Label::Negative) != y.end();
  if (!has_pos || !has_neg) throw Error("training data must contain both classes");

  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    diag[i] = std::inner_product(row.begin(), row.end(), row.begin(), 1.0);
  }

  SvmSolution sol;
  sol.weights.assign(d, 0.0);
  double& b = sol.bias;
  auto& w = sol.weights;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(cfg.seed);
  const double upper = cfg.c;

  for (std::uint32_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const auto row = x.row(i);
      const double yi = sign(y[i]);
      const double grad = yi * std::inner_product(row.begin(), row.end(), w.begin(), b) - 1.0;
      double pg = grad;
      if (alpha[i] == 0.0) pg = std::min(grad, 0.0);
      else if (alpha[i] == upper) pg = std::max(grad, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - grad / diag[i], 0.0, upper);
        const double step = (alpha[i] - old) * yi;
        for (std::size_t j = 0; j < d; ++j) w[j] += step * row[j];
        b += step;
      }
    }
    double norm = b * b;
    for (double wj : w) norm += wj * wj;
    sol.objective_history.push_back(0.5 * norm - std::accumulate(alpha.begin(), alpha.end(), 0.0));
    sol.epochs = epoch;
    if (pg_max - pg_min <= cfg.tolerance) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

Model::Model(FeatureMask mask, std::vector<double> weights, double bias, Scaler scaler,
             TrainConfig config)
    : mask_(mask), weights_(std::move(weights)), bias_(bias), scaler_(std::move(scaler)),
      config_(config) {
  if (weights_.size() != mask_.size()) {
    throw Error("model has " + std::to_string(weights_.size()) + " weights for " +
                std::to_string(mask_.size()) + " features");
  }
  if (scaler_.mask() != mask_) throw Error("model scaler mask differs from model mask");
}

double Model::decision_value(const FeatureVector& v) const {
  if (v.mask() != mask_) {
    throw Error("feature mask " + v.mask().to_string() + " does not match model mask " +
                mask_.to_string());
  }
  double dec = bias_;
  std::size_t k = 0;
  for (const auto& id : mask_.features()) dec += weights_[k++] * scaler_.standardize(id, v.value(id));
  return dec;
}

Label Model::predict(const FeatureVector& v) const { return label_for_decision(decision_value(v)); }

Model train_model(std::span<const FeatureVector> rows, std::span<const Label> labels,
                  const TrainConfig& cfg) {
  if (rows.size() != labels.size()) throw Error("row and label counts differ");
  Scaler scaler = fit_scaler(rows);
  const FeatureMask mask = scaler.mask();
  DenseMatrix x(rows.size(), mask.size());
  for (std::size_t i = 0; i < rows.size(); ++i) scaler.transform_into(rows[i], x.row(i));
  auto sol = train_linear_svm(x, labels, cfg);
  return Model(mask, std::move(sol.weights), sol.bias, std::move(scaler), cfg);
}

void save_model(const Model& m, std::ostream& out) {
  nlohmann::ordered_json j;
  j["format"] = "medsyn-model";
  j["version"] = 1;
  j["mask"] = m.mask().to_string();
  j["weights"] = m.weights();
  j["bias"] = m.bias();
  auto scaler = nlohmann::ordered_json::array();
  for (const auto& id : m.mask().features()) {
    const auto& c = m.scaler().column(id);
    scaler.push_back({{"feature", id.value()}, {"mean", c.mean}, {"stddev", c.stddev},
                      {"constant", c.constant}});
  }
  j["scaler"] = std::move(scaler);
  const auto& cfg = m.training_config();
  j["training"] = {{"C", cfg.c}, {"tolerance", cfg.tolerance}, {"max_epochs", cfg.max_epochs},
                   {"seed", cfg.seed}};
  out << j.dump(2) << '\n';
}

Model load_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "medsyn-model") throw Error("not a medsyn model file");
    if (j.at("version") != 1) throw Error("unsupported model version " + j.at("version").dump());
    const auto mask = FeatureMask::parse(j.at("mask").get<std::string>());
    std::array<Scaler::Column, kFeatureCount> columns{};
    std::uint32_t seen = 0;
    for (const auto& c : j.at("scaler")) {
      const FeatureId id(c.at("feature").get<int>());
      columns[id.index()] = {c.at("mean").get<double>(), c.at("stddev").get<double>(),
                             c.at("constant").get<bool>()};
      seen |= id.bit();
    }
    if (seen != mask.bits()) throw Error("scaler features do not match the model mask");
    const auto& t = j.at("training");
    TrainConfig cfg{t.at("C").get<double>(), t.at("tolerance").get<double>(),
                    t.at("max_epochs").get<std::uint32_t>(), t.at("seed").get<std::uint64_t>()};
    return Model(mask, j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(),
                 Scaler(mask, columns), cfg);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace medsyn
