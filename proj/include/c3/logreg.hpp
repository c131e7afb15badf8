#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "c3/errors.hpp"
#include "c3/linear.hpp"

namespace c3 {

struct LogRegConfig {
  bool subtract_mean = false;  // default: divide by std only
  double grad_tolerance = 1e-8;
  int max_iterations = 200000;
  double separable_cap = 30.0;  // |coef| beyond this flags separability
};

struct LogRegResult {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;  // on standardized predictors
  double intercept = 0.0;
  Eigen::VectorXd ci_low;
  Eigen::VectorXd ci_high;
  Eigen::VectorXd divisors;       // per-column standard deviation used
  bool separable = false;         // standard errors did not converge
  bool ci_valid = false;
  int iterations = 0;
  double grad_norm = 0.0;
  Metrics in_sample;
};

// Logistic regression on predictors divided by their sample standard
// deviation (mean subtraction optional), with an intercept. Full-batch
// gradient descent with Armijo backtracking on the mean negative
// log-likelihood; Wald 95% confidence intervals from the inverse observed
// information. Separable data caps the coefficients and flags the result.
inline LogRegResult train_logreg_standardized(const Eigen::MatrixXd& counts,
                                              const std::vector<int>& labels,
                                              std::vector<std::string> names = {},
                                              const LogRegConfig& cfg = {}) {
  const int n = static_cast<int>(counts.rows());
  const int p = static_cast<int>(counts.cols());
  if (n < 2 || static_cast<int>(labels.size()) != n)
    throw UsageError("logreg: need >= 2 rows with matching labels");
  if ((counts.array() < 0.0).any())
    throw UsageError("logreg: predictor counts must be non-negative");
  bool has_pos = false, has_neg = false;
  for (int y : labels) (y == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw DataError("logreg: both classes must be present");

  LogRegResult res;
  res.names = std::move(names);
  if (res.names.empty())
    for (int j = 0; j < p; ++j) res.names.push_back("x" + std::to_string(j));

  // Standardize: divide by sample std (ddof = 1). Constant columns keep
  // divisor 1 so they contribute a redundant intercept-like column; their
  // coefficient is meaningless but harmless.
  Eigen::VectorXd mean = counts.colwise().mean();
  res.divisors = Eigen::VectorXd::Ones(p);
  for (int j = 0; j < p; ++j) {
    const double ss = (counts.col(j).array() - mean[j]).square().sum();
    const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    if (sd > 0.0) res.divisors[j] = sd;
  }
  Eigen::MatrixXd Z(n, p + 1);  // standardized predictors + intercept column
  for (int j = 0; j < p; ++j) {
    Z.col(j) = counts.col(j) / res.divisors[j];
    if (cfg.subtract_mean) Z.col(j).array() -= mean[j] / res.divisors[j];
  }
  Z.col(p).setOnes();

  Eigen::VectorXd ysign(n);
  for (int i = 0; i < n; ++i) ysign[i] = labels[i] == 1 ? 1.0 : -1.0;

  auto objective = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd margins = -(Z * beta).cwiseProduct(ysign);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = margins[i];
      total += m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
    return total / n;
  };
  auto gradient = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd s = Z * beta;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p + 1);
    for (int i = 0; i < n; ++i)
      g += (-ysign[i] * detail::sigmoid(-ysign[i] * s[i])) * Z.row(i).transpose();
    return Eigen::VectorXd(g / n);
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  double f = objective(beta);
  int it = 0;
  double gnorm = 0.0;
  for (; it < cfg.max_iterations; ++it) {
    const Eigen::VectorXd g = gradient(beta);
    gnorm = g.norm();
    if (gnorm <= cfg.grad_tolerance) break;
    if (beta.head(p).cwiseAbs().maxCoeff() > cfg.separable_cap) {
      res.separable = true;
      break;
    }
    // Armijo backtracking along the steepest descent direction.
    double step = 1.0;
    const double slope = -g.squaredNorm();
    while (step > 1e-16) {
      const Eigen::VectorXd cand = beta - step * g;
      const double fc = objective(cand);
      if (fc <= f + 1e-4 * step * slope) {
        beta = cand;
        f = fc;
        break;
      }
      step *= 0.5;
    }
    if (step <= 1e-16) break;  // no further progress at float precision
  }
  res.iterations = it;
  res.grad_norm = gnorm;
  res.coefficients = beta.head(p);
  res.intercept = beta[p];

  // Observed information on the sum-scale likelihood: H = sum pi(1-pi) z z^T.
  if (!res.separable) {
    const Eigen::VectorXd s = Z * beta;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p + 1, p + 1);
    for (int i = 0; i < n; ++i) {
      const double pi = detail::sigmoid(s[i]);
      H += pi * (1.0 - pi) * (Z.row(i).transpose() * Z.row(i));
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Eigen::MatrixXd cov =
          ldlt.solve(Eigen::MatrixXd::Identity(p + 1, p + 1));
      res.ci_low = Eigen::VectorXd(p);
      res.ci_high = Eigen::VectorXd(p);
      bool ok = true;
      for (int j = 0; j < p; ++j) {
        const double var = cov(j, j);
        if (!(var >= 0.0) || !std::isfinite(var)) ok = false;
        const double se = std::sqrt(std::max(var, 0.0));
        res.ci_low[j] = res.coefficients[j] - 1.95996398454005 * se;
        res.ci_high[j] = res.coefficients[j] + 1.95996398454005 * se;
      }
      res.ci_valid = ok;
    }
  }

  // In-sample fit: p > 0.5 predicts constructive.
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  const Eigen::VectorXd s = Z * beta;
  for (int i = 0; i < n; ++i) {
    const bool pred = s[i] > 0.0;
    const bool truth = labels[i] == 1;
    if (pred && truth) ++tp;
    else if (pred && !truth) ++fp;
    else if (!pred && !truth) ++tn;
    else ++fn;
  }
  res.in_sample = metrics_from_counts(tp, fp, tn, fn);
  return res;
}

}  // namespace c3
