#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "c3/agreement.hpp"
#include "c3/corpus.hpp"
#include "c3/errors.hpp"
#include "c3/linear.hpp"
#include "c3/pipeline.hpp"

namespace c3 {

// ---------------------------------------------------------------------------
// Error collection and the length-bias report.

struct Prediction {
  std::string id;
  Label predicted = Label::non_constructive;
  double score = 0.0;  // decision value (linear) or constructive probability (CNN)
};

struct ErrorRecord {
  std::string id;
  Label truth = Label::non_constructive;
  Label predicted = Label::non_constructive;
  double score = 0.0;
  std::size_t token_length = 0;
};

// Exactly the misclassified comments. Predictions must align 1:1 with the
// test set by id.
inline std::vector<ErrorRecord> collect_errors(const std::vector<Prediction>& predictions,
                                               const std::vector<LabeledComment>& test) {
  std::map<std::string, const LabeledComment*> by_id;
  for (const auto& c : test)
    if (!by_id.emplace(c.raw.id, &c).second)
      throw DataError("collect_errors: duplicate test id '" + c.raw.id + "'");
  if (predictions.size() != test.size())
    throw DataError("collect_errors: " + std::to_string(predictions.size()) +
                    " predictions for " + std::to_string(test.size()) + " comments");
  std::vector<ErrorRecord> errors;
  for (const auto& p : predictions) {
    auto it = by_id.find(p.id);
    if (it == by_id.end())
      throw DataError("collect_errors: prediction for unknown id '" + p.id + "'");
    const LabeledComment& c = *it->second;
    if (p.predicted == c.label) continue;
    errors.push_back({p.id, c.label, p.predicted, p.score, c.token_length});
  }
  return errors;
}

// Default word-token buckets; the last bucket is open-ended.
inline std::vector<double> default_length_buckets() {
  return {0, 25, 50, 75, 100, 150, 200, 300, 500};
}

struct LengthBiasReport {
  std::vector<double> bucket_edges;  // lower edges; last bucket extends to inf
  std::vector<std::size_t> fp_hist;
  std::vector<std::size_t> fn_hist;
  double mean_fp_length = 0.0;
  double mean_fn_length = 0.0;
  double score_length_corr = 0.0;      // over raw scores of errors
  double score_length_corr_abs = 0.0;  // over |score|; both reported because
                                       // decision values of FNs are negative
  bool degenerate = false;
  std::size_t n_fp = 0;
  std::size_t n_fn = 0;
  double test_f1 = 0.0;
};

inline LengthBiasReport length_bias_report(const std::vector<ErrorRecord>& errors,
                                           std::vector<double> bucket_edges =
                                               default_length_buckets()) {
  if (bucket_edges.empty()) throw UsageError("length_bias_report: no bucket edges");
  for (std::size_t i = 1; i < bucket_edges.size(); ++i)
    if (!(bucket_edges[i] > bucket_edges[i - 1]))
      throw UsageError("length_bias_report: bucket edges must be strictly increasing");

  LengthBiasReport r;
  r.bucket_edges = bucket_edges;
  r.fp_hist.assign(bucket_edges.size(), 0);
  r.fn_hist.assign(bucket_edges.size(), 0);

  auto bucket_of = [&](double len) {
    std::size_t b = 0;
    while (b + 1 < bucket_edges.size() && len >= bucket_edges[b + 1]) ++b;
    return b;
  };

  double fp_len = 0.0, fn_len = 0.0;
  std::vector<double> scores, abs_scores, lengths;
  for (const auto& e : errors) {
    const double len = static_cast<double>(e.token_length);
    if (e.predicted == Label::constructive) {
      ++r.n_fp;
      fp_len += len;
      ++r.fp_hist[bucket_of(len)];
    } else {
      ++r.n_fn;
      fn_len += len;
      ++r.fn_hist[bucket_of(len)];
    }
    scores.push_back(e.score);
    abs_scores.push_back(std::fabs(e.score));
    lengths.push_back(len);
  }
  if (r.n_fp > 0) r.mean_fp_length = fp_len / static_cast<double>(r.n_fp);
  if (r.n_fn > 0) r.mean_fn_length = fn_len / static_cast<double>(r.n_fn);
  if (scores.size() < 2) {
    r.degenerate = true;
    return r;
  }
  try {
    r.score_length_corr = pearson(scores, lengths);
    r.score_length_corr_abs = pearson(abs_scores, lengths);
  } catch (const DegenerateError&) {
    r.degenerate = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Feature ablation and domain transfer.

struct FeatureTableCell {
  std::string group;
  double f1 = 0.0;
  Metrics metrics;
  bool skipped = false;
  std::string note;
};

// Trains one linear model per requested group (plus "all") under one shared
// TrainConfig and reports test F1 per cell. Cells are independent runs.
inline std::vector<FeatureTableCell> feature_ablation(
    const std::vector<LabeledComment>& train_corpus,
    const std::vector<LabeledComment>& test_corpus,
    const std::vector<std::string>& groups, const FeatureResources& resources,
    const FeatureConfig& feature_config, const TrainConfig& train_config) {
  FeatureConfig full_config = feature_config;
  full_config.groups = {feature_group_names().begin(), feature_group_names().end()};
  const FeatureExtractor extractor = build_extractor(train_corpus, resources, full_config);
  const DenseLayout full_layout = layout_of(extractor);
  const Dataset train_full = make_dataset(extractor, train_corpus);
  const Dataset test_full = make_dataset(extractor, test_corpus);

  std::vector<FeatureTableCell> table;
  for (const auto& group : groups) {
    FeatureTableCell cell;
    cell.group = group;
    std::set<std::string> selection;
    if (group == "all") {
      for (const auto& g : feature_group_names()) selection.insert(g);
    } else {
      selection.insert(group);
    }
    try {
      const Dataset tr = project_dataset(train_full, full_layout, selection);
      const Dataset te = project_dataset(test_full, full_layout, selection);
      const LinearModel model = c3::train(tr, train_config);
      cell.metrics = evaluate(model, te);
      cell.f1 = cell.metrics.f1;
    } catch (const UsageError& e) {
      cell.skipped = true;
      cell.note = e.what();
    }
    table.push_back(std::move(cell));
  }
  return table;
}

// Train on corpus A, evaluate on corpus B. The vocabulary and aux-group
// resolution come from A alone, so this is exactly the ablation machinery
// pointed across domains.
inline std::vector<FeatureTableCell> domain_transfer(
    const std::vector<LabeledComment>& train_corpus,
    const std::vector<LabeledComment>& test_corpus,
    const std::vector<std::string>& groups, const FeatureResources& resources,
    const FeatureConfig& feature_config, const TrainConfig& train_config) {
  return feature_ablation(train_corpus, test_corpus, groups, resources, feature_config,
                          train_config);
}

// ---------------------------------------------------------------------------
// Corpus-level correlation study.

struct CorrelationEntry {
  double value = 0.0;
  bool degenerate = false;
  std::size_t n = 0;
};

struct CorrelationStudy {
  std::optional<CorrelationEntry> toxicity_pearson;
  std::optional<CorrelationEntry> toxicity_spearman;
  std::optional<CorrelationEntry> toxicity_kendall;
  std::optional<CorrelationEntry> agree_pearson;
  std::optional<CorrelationEntry> length_label_pearson;
  std::vector<std::pair<double, double>> toxicity_scatter;  // (score, toxicity)
  std::vector<std::string> notes;  // skipped pairs and why
};

inline CorrelationStudy correlation_study(const std::vector<LabeledComment>& corpus,
                                          const std::string& toxicity_column = "toxicity") {
  if (corpus.empty()) throw UsageError("correlation_study: empty corpus");
  CorrelationStudy out;

  auto run = [](const std::vector<double>& x, const std::vector<double>& y,
                double (*fn)(const std::vector<double>&, const std::vector<double>&)) {
    CorrelationEntry e;
    e.n = x.size();
    try {
      e.value = fn(x, y);
    } catch (const DegenerateError&) {
      e.degenerate = true;
    }
    return e;
  };

  std::vector<double> scores_tox, tox;
  for (const auto& c : corpus) {
    auto it = c.raw.aux_scores.find(toxicity_column);
    if (it == c.raw.aux_scores.end()) continue;
    scores_tox.push_back(c.score);
    tox.push_back(it->second);
    out.toxicity_scatter.emplace_back(c.score, it->second);
  }
  if (scores_tox.size() >= 2) {
    out.toxicity_pearson = run(scores_tox, tox, pearson);
    out.toxicity_spearman = run(scores_tox, tox, spearman);
    out.toxicity_kendall = run(scores_tox, tox, kendall_tau);
  } else {
    out.notes.push_back("toxicity column '" + toxicity_column +
                        "' missing; constructiveness-toxicity pair skipped");
    out.toxicity_scatter.clear();
  }

  std::vector<double> scores_agree, agree;
  for (const auto& c : corpus) {
    if (!c.raw.agree_fraction) continue;
    scores_agree.push_back(c.score);
    agree.push_back(*c.raw.agree_fraction);
  }
  if (scores_agree.size() >= 2) {
    out.agree_pearson = run(scores_agree, agree, pearson);
  } else {
    out.notes.push_back("agree column missing; constructiveness-agreement pair skipped");
  }

  std::vector<double> lengths, labels;
  for (const auto& c : corpus) {
    lengths.push_back(static_cast<double>(c.token_length));
    labels.push_back(c.label == Label::constructive ? 1.0 : 0.0);
  }
  out.length_label_pearson = run(lengths, labels, pearson);
  return out;
}

}  // namespace c3
