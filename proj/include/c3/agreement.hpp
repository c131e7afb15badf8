#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "c3/corpus.hpp"
#include "c3/errors.hpp"
#include "c3/rng.hpp"

namespace c3 {

// ---------------------------------------------------------------------------
// Krippendorff's alpha, nominal data, coincidence-matrix formulation.

struct RatingMatrix {
  std::vector<std::string> units;
  std::vector<std::vector<int>> ratings;  // per unit, 2..k nominal values
};

struct AlphaResult {
  double alpha = 0.0;
  bool degenerate = false;   // expected disagreement is zero
  std::size_t units_used = 0;
  std::size_t units_excluded = 0;  // fewer than 2 ratings
};

// alpha = 1 - D_o/D_e. Each unit with m ratings contributes its m*(m-1)
// ordered within-unit pairs at weight 1/(m-1) to the coincidence matrix;
// D_e comes from the matrix marginals n_c*n_k/(n*(n-1)).
inline AlphaResult krippendorff_alpha_nominal(const RatingMatrix& m) {
  AlphaResult res;
  std::map<int, std::map<int, double>> coincidence;
  std::map<int, double> marginal;
  double n = 0.0;
  for (const auto& unit : m.ratings) {
    if (unit.size() < 2) {
      ++res.units_excluded;
      continue;
    }
    ++res.units_used;
    const double w = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t i = 0; i < unit.size(); ++i)
      for (std::size_t j = 0; j < unit.size(); ++j) {
        if (i == j) continue;
        coincidence[unit[i]][unit[j]] += w;
        marginal[unit[i]] += w;
        n += w;
      }
  }
  if (res.units_used < 2)
    throw UsageError("krippendorff_alpha: needs at least 2 units with >=2 ratings");

  double observed_disagreement = 0.0;
  for (const auto& [c, row] : coincidence)
    for (const auto& [k, v] : row)
      if (c != k) observed_disagreement += v;

  double sum_sq = 0.0;
  for (const auto& [c, nc] : marginal) {
    (void)c;
    sum_sq += nc * nc;
  }
  const double expected = n * n - sum_sq;  // proportional to D_e
  if (expected <= 0.0) {
    res.degenerate = true;
    return res;
  }
  res.alpha = 1.0 - (n - 1.0) * observed_disagreement / expected;
  return res;
}

// ---------------------------------------------------------------------------
// Paired ratings and the controversial-pair experiment.

using PairedRatings = std::vector<std::pair<int, int>>;

inline double percentage_agreement(const PairedRatings& pairs) {
  if (pairs.empty()) throw UsageError("percentage_agreement: no pairs");
  std::size_t equal = 0;
  for (const auto& [a, b] : pairs)
    if (a == b) ++equal;
  return static_cast<double>(equal) / static_cast<double>(pairs.size());
}

struct ControversialResult {
  PairedRatings pairs;             // (agreeing side, disagreeing side) answers
  std::size_t comments_seen = 0;
  std::size_t comments_controversial = 0;
};

// For every comment with at least one agreeing and one disagreeing annotator,
// emit the constructiveness answers of one uniformly sampled annotator from
// each side. Comments are visited in sorted id order so a seed fixes the
// result exactly.
inline ControversialResult controversial_pairs(const std::vector<AnnotationRow>& rows,
                                               std::uint64_t seed,
                                               const AgreeAnswerMapping& agree_map = {}) {
  std::map<std::string, std::vector<const AnnotationRow*>> by_id;
  for (const auto& r : rows) by_id[r.comment_id].push_back(&r);

  ControversialResult res;
  Rng rng(seed);
  for (const auto& [id, group] : by_id) {
    (void)id;
    ++res.comments_seen;
    std::vector<int> agreeing, disagreeing;
    for (const AnnotationRow* a : group) {
      const int cls = agree_map.classify(a->agree_answer);
      if (cls == 1) agreeing.push_back(a->constructive);
      if (cls == 0) disagreeing.push_back(a->constructive);
    }
    if (agreeing.empty() || disagreeing.empty()) continue;
    ++res.comments_controversial;
    const int a = agreeing[rng.below(agreeing.size())];
    const int d = disagreeing[rng.below(disagreeing.size())];
    res.pairs.emplace_back(a, d);
  }
  return res;
}

// Treats each pair as a 2-rater unit.
inline AlphaResult alpha_of_pairs(const PairedRatings& pairs) {
  RatingMatrix m;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    m.units.push_back(std::to_string(i));
    m.ratings.push_back({pairs[i].first, pairs[i].second});
  }
  return krippendorff_alpha_nominal(m);
}

// ---------------------------------------------------------------------------
// Correlation coefficients.

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw UsageError("pearson: vectors must have equal length >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateError("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

// Average ranks for ties, 1-based.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw UsageError("spearman: vectors must have equal length >= 2");
  return pearson(average_ranks(x), average_ranks(y));
}

// tau-b with tie correction.
inline double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw UsageError("kendall_tau: vectors must have equal length >= 2");
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      const double s = dx * dy;
      if (s > 0) ++concordant;
      else if (s < 0) ++discordant;
    }
  auto tie_term = [](const std::vector<double>& v) {
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    double t = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double m = static_cast<double>(j - i + 1);
      t += m * (m - 1.0) / 2.0;
      i = j + 1;
    }
    return t;
  };
  const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  const double n1 = tie_term(x), n2 = tie_term(y);
  const double denom = std::sqrt((n0 - n1) * (n0 - n2));
  if (denom == 0.0) throw DegenerateError("kendall_tau: zero variance");
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) / denom;
}

}  // namespace c3
