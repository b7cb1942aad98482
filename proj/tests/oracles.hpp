#pragma once

// Reference implementations used to check the library independently.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "medsyn/core.hpp"

namespace oracle {

/// Top-down recursion over the three edit operations, memoized on (i, j).
inline std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::optional<std::size_t>> memo((a.size() + 1) * (b.size() + 1));
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto& slot = memo[i * (b.size() + 1) + j];
    if (slot) return *slot;
    const std::size_t del = 1 + go(i + 1, j);
    const std::size_t ins = 1 + go(i, j + 1);
    const std::size_t sub = (a[i] == b[j] ? 0 : 1) + go(i + 1, j + 1);
    slot = std::min({del, ins, sub});
    return *slot;
  };
  return go(0, 0);
}

inline double f1_of(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double r = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
}

struct Threshold {
  double cut = 0.0;
  bool above = true;  // predict positive when value >= cut (or <= cut when false)
};

/// Exhaustive single-feature threshold classifier. Missing values count as
/// negative predictions. The cut maximizing training F1 is scored on test.
inline double threshold_f1(const std::vector<std::optional<double>>& train_x,
                           const std::vector<medsyn::Label>& train_y,
                           const std::vector<std::optional<double>>& test_x,
                           const std::vector<medsyn::Label>& test_y) {
  auto f1_for = [](const Threshold& t, const std::vector<std::optional<double>>& x,
                   const std::vector<medsyn::Label>& y) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const bool pos = x[i] && (t.above ? *x[i] >= t.cut : *x[i] <= t.cut);
      const bool truth = y[i] == medsyn::Label::Positive;
      if (pos && truth) ++tp;
      if (pos && !truth) ++fp;
      if (!pos && truth) ++fn;
    }
    return f1_of(tp, fp, fn);
  };
  std::vector<double> cuts;
  for (const auto& v : train_x) {
    if (v) cuts.push_back(*v);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Threshold best;
  double best_f1 = -1.0;
  for (double c : cuts) {
    for (bool above : {true, false}) {
      const Threshold t{c, above};
      const double f = f1_for(t, train_x, train_y);
      if (f > best_f1) {
        best_f1 = f;
        best = t;
      }
    }
  }
  return f1_for(best, test_x, test_y);
}

}  // namespace oracle
