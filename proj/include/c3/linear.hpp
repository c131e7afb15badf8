#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "c3/corpus.hpp"
#include "c3/errors.hpp"
#include "c3/features.hpp"
#include "c3/rng.hpp"

namespace c3 {

struct Dataset {
  std::vector<Example> examples;
  std::vector<int> labels;  // 1 = constructive, 0 = non-constructive
  int dense_dim = 0;
  int sparse_dim = 0;

  std::size_t size() const { return examples.size(); }
};

enum class LossKind { hinge, logistic };

struct TrainConfig {
  LossKind loss = LossKind::hinge;
  double l2_lambda = 1e-4;
  int epochs = 20;
  double eta0 = 0.01;  // eta_t = eta0 / (1 + eta0 * lambda * t)
  std::uint64_t seed = 42;
  bool shuffle = true;

  void validate() const {
    if (epochs < 1) throw ConfigError("train config: epochs must be >= 1");
    if (l2_lambda < 0) throw ConfigError("train config: l2_lambda must be >= 0");
  }
};

// Per-feature standardization of the dense block, fitted on training data.
// Constant columns are flagged and map to 0 so their weights stay 0.
// The sparse lexical block bypasses standardization (TF-IDF is already
// normalized and z-scoring it would destroy sparsity).
struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::vector<bool> constant;

  static Standardization fit(const std::vector<Example>& examples, int dense_dim) {
    Standardization s;
    s.mean = Eigen::VectorXd::Zero(dense_dim);
    s.std = Eigen::VectorXd::Ones(dense_dim);
    s.constant.assign(dense_dim, false);
    if (examples.empty() || dense_dim == 0) return s;
    const double n = static_cast<double>(examples.size());
    for (const auto& ex : examples) s.mean += ex.dense;
    s.mean /= n;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(dense_dim);
    for (const auto& ex : examples) {
      const Eigen::VectorXd d = ex.dense - s.mean;
      var += d.cwiseProduct(d);
    }
    var /= n;
    for (int i = 0; i < dense_dim; ++i) {
      const double sd = std::sqrt(var[i]);
      if (sd > 0.0)
        s.std[i] = sd;
      else
        s.constant[i] = true;
    }
    return s;
  }

  Eigen::VectorXd transform(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(x.size());
    for (int i = 0; i < x.size(); ++i)
      out[i] = constant[i] ? 0.0 : (x[i] - mean[i]) / std[i];
    return out;
  }
};

struct LinearModel {
  Eigen::VectorXd weights;  // dense block first, then sparse block
  double bias = 0.0;
  Standardization standardization;
  int dense_dim = 0;
  int sparse_dim = 0;

  double decision_score(const Example& x) const {
    const Eigen::VectorXd z = standardization.transform(x.dense);
    double s = bias + weights.head(dense_dim).dot(z);
    for (const auto& [idx, val] : x.sparse) s += weights[dense_dim + idx] * val;
    return s;
  }

  // Ties at exactly 0 go to non_constructive.
  Label predict(const Example& x) const {
    return decision_score(x) > 0.0 ? Label::constructive : Label::non_constructive;
  }
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// d(loss)/d(score) for y in {-1,+1}.
inline double dloss(LossKind loss, double score, double y) {
  switch (loss) {
    case LossKind::hinge:
      return (y * score < 1.0) ? -y : 0.0;
    case LossKind::logistic:
      return -y * sigmoid(-y * score);
  }
  return 0.0;
}

inline double loss_value(LossKind loss, double score, double y) {
  switch (loss) {
    case LossKind::hinge:
      return std::max(0.0, 1.0 - y * score);
    case LossKind::logistic: {
      // log(1 + exp(-ys)) computed stably
      const double m = -y * score;
      return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
  }
  return 0.0;
}

}  // namespace detail

// Per-epoch shuffled SGD on the regularized objective
//   lambda/2 ||w||^2 + mean_i loss(y_i, w.x_i + b)
// with eta_t = eta0/(1 + eta0*lambda*t). The weight vector is kept as
// scale * v so the L2 decay touches only the scale, not every sparse entry.
// The bias is not regularized.
inline LinearModel train(const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() < 2) throw DataError("train: need at least 2 examples");
  bool has_pos = false, has_neg = false;
  for (int y : data.labels) (y == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw DataError("train: both classes must be present");

  LinearModel model;
  model.dense_dim = data.dense_dim;
  model.sparse_dim = data.sparse_dim;
  model.standardization = Standardization::fit(data.examples, data.dense_dim);

  std::vector<Eigen::VectorXd> dense_std;
  dense_std.reserve(data.size());
  for (const auto& ex : data.examples)
    dense_std.push_back(model.standardization.transform(ex.dense));

  const int dim = data.dense_dim + data.sparse_dim;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  double scale = 1.0;
  double bias = 0.0;
  double t = 0.0;

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(cfg.seed);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(order);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t i = order[k];
      const Example& ex = data.examples[i];
      const double y = data.labels[i] == 1 ? 1.0 : -1.0;

      double score = bias + scale * v.head(data.dense_dim).dot(dense_std[i]);
      for (const auto& [idx, val] : ex.sparse)
        score += scale * v[data.dense_dim + idx] * val;

      const double eta = cfg.eta0 / (1.0 + cfg.eta0 * cfg.l2_lambda * t);
      scale *= (1.0 - eta * cfg.l2_lambda);
      if (scale < 1e-9) {
        v *= scale;
        scale = 1.0;
      }
      const double g = detail::dloss(cfg.loss, score, y);
      if (g != 0.0) {
        const double step = -eta * g / scale;
        v.head(data.dense_dim) += step * dense_std[i];
        for (const auto& [idx, val] : ex.sparse) v[data.dense_dim + idx] += step * val;
        bias += -eta * g;
      }
      t += 1.0;
    }
  }
  model.weights = scale * v;
  model.bias = bias;
  return model;
}

// ---------------------------------------------------------------------------
// Metrics. Positive class = constructive.

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn,
                                   std::size_t fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  const double p_den = static_cast<double>(tp + fp);
  const double r_den = static_cast<double>(tp + fn);
  m.precision = p_den > 0 ? tp / p_den : 0.0;
  m.recall = r_den > 0 ? tp / r_den : 0.0;
  m.f1 = (m.precision + m.recall) > 0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  // F1 of the negative class for the macro average
  const double np = static_cast<double>(tn + fn) > 0
                        ? tn / static_cast<double>(tn + fn)
                        : 0.0;
  const double nr = static_cast<double>(tn + fp) > 0
                        ? tn / static_cast<double>(tn + fp)
                        : 0.0;
  const double nf1 = (np + nr) > 0 ? 2.0 * np * nr / (np + nr) : 0.0;
  m.macro_f1 = (m.f1 + nf1) / 2.0;
  const double total = static_cast<double>(tp + fp + tn + fn);
  m.accuracy = total > 0 ? (tp + tn) / total : 0.0;
  return m;
}

inline Metrics evaluate(const LinearModel& model, const Dataset& data) {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool pred = model.predict(data.examples[i]) == Label::constructive;
    const bool truth = data.labels[i] == 1;
    if (pred && truth) ++tp;
    else if (pred && !truth) ++fp;
    else if (!pred && !truth) ++tn;
    else ++fn;
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

// ---------------------------------------------------------------------------
// Full-batch objective and analytic gradient, used by the finite-difference
// checks. Objective = lambda/2 ||w||^2 + mean loss; bias unregularized.
// Dense features are taken as-is (callers pre-standardize if they care).

inline double linear_objective(const Dataset& data, const Eigen::VectorXd& w, double b,
                               double lambda, LossKind loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Example& ex = data.examples[i];
    double s = b + w.head(data.dense_dim).dot(ex.dense);
    for (const auto& [idx, val] : ex.sparse) s += w[data.dense_dim + idx] * val;
    const double y = data.labels[i] == 1 ? 1.0 : -1.0;
    total += detail::loss_value(loss, s, y);
  }
  return 0.5 * lambda * w.squaredNorm() + total / static_cast<double>(data.size());
}

inline void linear_gradient(const Dataset& data, const Eigen::VectorXd& w, double b,
                            double lambda, LossKind loss, Eigen::VectorXd* grad_w,
                            double* grad_b) {
  *grad_w = lambda * w;
  *grad_b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Example& ex = data.examples[i];
    double s = b + w.head(data.dense_dim).dot(ex.dense);
    for (const auto& [idx, val] : ex.sparse) s += w[data.dense_dim + idx] * val;
    const double y = data.labels[i] == 1 ? 1.0 : -1.0;
    const double g = detail::dloss(loss, s, y) * inv_n;
    if (g == 0.0) continue;
    grad_w->head(data.dense_dim) += g * ex.dense;
    for (const auto& [idx, val] : ex.sparse) (*grad_w)[data.dense_dim + idx] += g * val;
    *grad_b += g;
  }
}

}  // namespace c3
