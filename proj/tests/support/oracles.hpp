#pragma once

// Independent reference implementations used only by tests. These compute
// the same quantities as the library through different routes so the two
// sides cross-check each other.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Krippendorff's alpha by direct enumeration: observed disagreement is the
// weighted fraction of disagreeing ordered within-unit pairs; expected
// disagreement comes from the raw value counts, D_e = (n^2 - sum n_c^2) /
// (n (n - 1)). Units with fewer than two ratings are skipped.
struct AlphaOracle {
  double alpha = 0.0;
  bool degenerate = false;
};

inline AlphaOracle alpha_by_enumeration(const std::vector<std::vector<int>>& units) {
  double n = 0.0;
  std::map<int, double> value_counts;
  double weighted_disagreements = 0.0;
  double weighted_pairs = 0.0;
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    const double w = 1.0 / static_cast<double>(unit.size() - 1);
    for (int v : unit) {
      value_counts[v] += 1.0;
      n += 1.0;
    }
    for (std::size_t i = 0; i < unit.size(); ++i)
      for (std::size_t j = 0; j < unit.size(); ++j) {
        if (i == j) continue;
        weighted_pairs += w;
        if (unit[i] != unit[j]) weighted_disagreements += w;
      }
  }
  AlphaOracle out;
  double sum_sq = 0.0;
  for (const auto& [v, c] : value_counts) {
    (void)v;
    sum_sq += c * c;
  }
  const double d_e = (n * n - sum_sq) / (n * (n - 1.0));
  if (d_e <= 0.0) {
    out.degenerate = true;
    return out;
  }
  const double d_o = weighted_disagreements / weighted_pairs;
  out.alpha = 1.0 - d_o / d_e;
  return out;
}

// Explicit average-rank table (rank = mean of the 1-based positions a value
// occupies in the sorted order), then the textbook product-moment formula.
inline std::vector<double> rank_table(const std::vector<double>& x) {
  std::vector<double> ranks(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double below = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < x[i]) below += 1.0;
      if (x[j] == x[i]) equal += 1.0;
    }
    ranks[i] = below + (equal + 1.0) / 2.0;
  }
  return ranks;
}

inline double pearson_textbook(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double num = n * sxy - sx * sy;
  const double den = std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
  return num / den;
}

// Central finite differences over a parameter vector, any objective.
inline Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at,
    double h) {
  Eigen::VectorXd g(at.size());
  for (int i = 0; i < at.size(); ++i) {
    Eigen::VectorXd lo = at, hi = at;
    lo[i] -= h;
    hi[i] += h;
    g[i] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-12});
  return std::fabs(a - b) / scale;
}

}  // namespace oracle
