#include "doctest.h"

#include <cmath>

#include "c3/analysis.hpp"
#include "c3/cnn.hpp"

#include "support/synth.hpp"

using namespace c3;

namespace {

const FeatureResources& resources() {
  static const FeatureResources r = load_feature_resources(C3_SOURCE_DIR "/data");
  return r;
}

std::vector<Prediction> predict_all(const LinearModel& m, const FeatureExtractor& ex,
                                    const std::vector<LabeledComment>& corpus) {
  const DenseLayout layout = layout_of(ex);
  std::vector<Prediction> preds;
  for (const auto& c : corpus) {
    const Example e = to_example(ex.extract(c.raw), layout, ex.vocab().size());
    preds.push_back({c.raw.id, m.predict(e), m.decision_score(e)});
  }
  return preds;
}

}  // namespace

TEST_CASE("collect_errors: perfect model, always-positive model, count consistency") {
  const auto corpus = synth::make_corpus({.n = 60, .aux_scores = false}, 3);

  std::vector<Prediction> perfect;
  for (const auto& c : corpus) perfect.push_back({c.raw.id, c.label, 0.0});
  CHECK(collect_errors(perfect, corpus).empty());

  std::vector<Prediction> always_pos;
  std::size_t negatives = 0;
  for (const auto& c : corpus) {
    always_pos.push_back({c.raw.id, Label::constructive, 1.0});
    if (c.label == Label::non_constructive) ++negatives;
  }
  const auto errors = collect_errors(always_pos, corpus);
  CHECK(errors.size() == negatives);
  for (const auto& e : errors) CHECK(e.predicted == Label::constructive);
}

TEST_CASE("collect_errors rejects misaligned predictions") {
  const auto corpus = synth::make_corpus({.n = 10, .aux_scores = false}, 5);
  std::vector<Prediction> preds;
  for (const auto& c : corpus) preds.push_back({c.raw.id, c.label, 0.0});
  preds[3].id = "nonexistent";
  CHECK_THROWS_AS(collect_errors(preds, corpus), DataError);
  preds.pop_back();
  CHECK_THROWS_AS(collect_errors(preds, corpus), DataError);
}

TEST_CASE("error records match the confusion matrix exactly") {
  const auto corpus = synth::make_corpus({.n = 400}, 7);
  auto [train_set, test_set] = split_train_test(corpus, 0.25, 42);
  FeatureConfig fc;
  const auto extractor = build_extractor(train_set, resources(), fc);
  const Dataset tr = make_dataset(extractor, train_set);
  const Dataset te = make_dataset(extractor, test_set);
  const LinearModel model = train(tr, TrainConfig{});
  const Metrics m = evaluate(model, te);
  const auto errors = collect_errors(predict_all(model, extractor, test_set), test_set);
  CHECK(errors.size() == m.fp + m.fn);
  const auto report = length_bias_report(errors);
  CHECK(report.n_fp == m.fp);
  CHECK(report.n_fn == m.fn);
  std::size_t fp_total = 0, fn_total = 0;
  for (auto v : report.fp_hist) fp_total += v;
  for (auto v : report.fn_hist) fn_total += v;
  CHECK(fp_total == m.fp);
  CHECK(fn_total == m.fn);
}

TEST_CASE("length_bias_report: histogram bucketing and means") {
  std::vector<ErrorRecord> errors;
  auto err = [&](Label pred, double score, std::size_t len) {
    errors.push_back({"id" + std::to_string(errors.size()),
                      pred == Label::constructive ? Label::non_constructive
                                                  : Label::constructive,
                      pred, score, len});
  };
  err(Label::constructive, 1.0, 10);   // FP bucket [0,25)
  err(Label::constructive, 2.0, 30);   // FP bucket [25,50)
  err(Label::non_constructive, -1.0, 60);   // FN bucket [50,75)
  err(Label::non_constructive, -0.5, 700);  // FN open-ended bucket

  const auto r = length_bias_report(errors, {0, 25, 50, 75, 100});
  CHECK(r.fp_hist == std::vector<std::size_t>{1, 1, 0, 0, 0});
  CHECK(r.fn_hist == std::vector<std::size_t>{0, 0, 1, 0, 1});
  CHECK(r.mean_fp_length == doctest::Approx(20.0));
  CHECK(r.mean_fn_length == doctest::Approx(380.0));
  CHECK_FALSE(r.degenerate);

  CHECK_THROWS_AS(length_bias_report(errors, {0, 25, 25}), UsageError);
  CHECK(length_bias_report({errors[0]}).degenerate);
}

TEST_CASE("refining bucket edges preserves total mass") {
  const auto corpus = synth::make_corpus({.n = 300}, 9);
  auto [train_set, test_set] = split_train_test(corpus, 0.3, 1);
  FeatureConfig fc;
  fc.groups = {"length", "argumentation"};
  const auto extractor = build_extractor(train_set, resources(), fc);
  const LinearModel model = train(make_dataset(extractor, train_set), TrainConfig{});
  const auto errors = collect_errors(predict_all(model, extractor, test_set), test_set);
  if (errors.size() < 2) return;  // nothing to histogram

  const auto coarse = length_bias_report(errors, {0, 50, 200});
  const auto fine = length_bias_report(errors, {0, 10, 25, 50, 75, 120, 200, 400});
  std::size_t coarse_total = 0, fine_total = 0;
  for (auto v : coarse.fp_hist) coarse_total += v;
  for (auto v : coarse.fn_hist) coarse_total += v;
  for (auto v : fine.fp_hist) fine_total += v;
  for (auto v : fine.fn_hist) fine_total += v;
  CHECK(coarse_total == fine_total);
  CHECK(coarse_total == errors.size());
}

TEST_CASE("scores independent of length give near-zero correlation") {
  Rng rng(13);
  std::vector<ErrorRecord> errors;
  for (int i = 0; i < 1000; ++i) {
    ErrorRecord e;
    e.id = std::to_string(i);
    e.predicted = rng.uniform() < 0.5 ? Label::constructive : Label::non_constructive;
    e.truth = e.predicted == Label::constructive ? Label::non_constructive
                                                 : Label::constructive;
    e.score = rng.gaussian();
    e.token_length = 1 + rng.below(300);
    errors.push_back(e);
  }
  const auto r = length_bias_report(errors);
  CHECK(std::fabs(r.score_length_corr) < 0.1);
}

TEST_CASE("feature ablation: per-group models, isolation across cells") {
  const auto corpus = synth::make_corpus({.n = 500}, 17);
  auto [train_set, test_set] = split_train_test(corpus, 0.2, 42);
  const std::vector<std::string> groups = {"length", "toxicity", "all"};
  const auto table = feature_ablation(train_set, test_set, groups, resources(),
                                      FeatureConfig{}, TrainConfig{});
  REQUIRE(table.size() == 3);
  CHECK(table[0].group == "length");
  for (const auto& cell : table) {
    CHECK_FALSE(cell.skipped);
    CHECK(cell.f1 > 0.0);
  }
  // length separates the synthetic corpus far better than the noise toxicity columns
  CHECK(table[0].f1 > table[1].f1);

  // isolation: the same cell recomputed alone is bit-identical
  const auto only_length = feature_ablation(train_set, test_set, {"length"}, resources(),
                                            FeatureConfig{}, TrainConfig{});
  CHECK(only_length[0].f1 == table[0].f1);
  CHECK(only_length[0].metrics.tp == table[0].metrics.tp);
}

TEST_CASE("domain transfer trains on A and evaluates on B with A's vocabulary") {
  const auto corpus_a = synth::make_corpus({.n = 400}, 19);
  const auto corpus_b = synth::make_corpus({.n = 200, .mean_len_pos = 40}, 23);
  const auto cells = domain_transfer(corpus_a, corpus_b, {"all"}, resources(),
                                     FeatureConfig{}, TrainConfig{});
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].f1 > 0.6);  // markers transfer across the length shift

  // within-domain consistency: transfer A->A equals ablation on A
  const auto within = domain_transfer(corpus_a, corpus_a, {"all"}, resources(),
                                      FeatureConfig{}, TrainConfig{});
  const auto ablate = feature_ablation(corpus_a, corpus_a, {"all"}, resources(),
                                       FeatureConfig{}, TrainConfig{});
  CHECK(within[0].f1 == ablate[0].f1);
}

TEST_CASE("correlation study: toxicity noise, agree signal, length signal") {
  const auto corpus = synth::make_corpus({.n = 800}, 29);
  const auto study = correlation_study(corpus);
  REQUIRE(study.toxicity_pearson.has_value());
  CHECK(std::fabs(study.toxicity_pearson->value) < 0.15);  // independent noise
  REQUIRE(study.agree_pearson.has_value());
  CHECK(study.agree_pearson->value > 0.3);  // built to correlate
  REQUIRE(study.length_label_pearson.has_value());
  CHECK(study.length_label_pearson->value > 0.4);  // confounded by design
  CHECK(study.toxicity_scatter.size() == corpus.size());
}

TEST_CASE("correlation study skips missing columns and flags constants") {
  auto corpus = synth::make_corpus({.n = 50, .aux_scores = false}, 31);
  const auto study = correlation_study(corpus);
  CHECK_FALSE(study.toxicity_pearson.has_value());
  CHECK_FALSE(study.agree_pearson.has_value());
  CHECK(study.notes.size() == 2);

  for (auto& c : corpus) c.raw.aux_scores["toxicity"] = 0.25;  // constant column
  const auto study2 = correlation_study(corpus);
  REQUIRE(study2.toxicity_pearson.has_value());
  CHECK(study2.toxicity_pearson->degenerate);
}

// The architectural contrast: a linear model with length features leans on
// length, a max-pooled CNN cannot. Trained on the same split of a corpus
// whose labels are token-driven but length-confounded, the CNN's
// error-score/length correlation must come out well below the linear model's.
TEST_CASE("length-bias contrast: CNN errors are less length-correlated than linear") {
  const auto corpus = synth::make_corpus({.n = 700, .marker_rate = 0.8}, 37);
  auto [train_set, test_set] = split_train_test(corpus, 0.3, 42);

  // linear side: all feature groups, default SGD
  FeatureConfig fc;
  const auto extractor = build_extractor(train_set, resources(), fc);
  const LinearModel linear_model = train(make_dataset(extractor, train_set), TrainConfig{});
  const auto linear_errors =
      collect_errors(predict_all(linear_model, extractor, test_set), test_set);
  REQUIRE(linear_errors.size() >= 2);
  const auto linear_report = length_bias_report(linear_errors);

  // CNN side: random embeddings, small model, same split
  std::vector<std::string> vocab_tokens;
  for (const auto& c : train_set)
    for (const auto& t : tokenize(c.raw.text).word_tokens) vocab_tokens.push_back(t);
  const EmbeddingTable emb = make_random_embeddings(vocab_tokens, 16, 7);

  CnnTrainConfig ccfg;
  ccfg.filters_per_width = 16;
  ccfg.epochs = 4;
  ccfg.max_seq_len = 250;
  ccfg.dropout = 0.25;
  ccfg.seed = 11;
  std::vector<CnnExample> cnn_train_set;
  for (const auto& c : train_set)
    cnn_train_set.push_back(
        {tokenize(c.raw.text).word_tokens, c.label == Label::constructive ? 1 : 0});
  const TrainedCnn cnn = cnn_train(cnn_train_set, emb, ccfg);

  std::vector<Prediction> cnn_preds;
  for (const auto& c : test_set) {
    const double p =
        cnn_predict_proba(cnn.params, emb, tokenize(c.raw.text).word_tokens, ccfg.max_seq_len);
    cnn_preds.push_back(
        {c.raw.id, p > 0.5 ? Label::constructive : Label::non_constructive, p});
  }
  const auto cnn_errors = collect_errors(cnn_preds, test_set);
  REQUIRE(cnn_errors.size() >= 2);
  const auto cnn_report = length_bias_report(cnn_errors);

  MESSAGE("linear corr=", linear_report.score_length_corr,
          " cnn corr=", cnn_report.score_length_corr);
  CHECK(cnn_report.score_length_corr < linear_report.score_length_corr);
}
