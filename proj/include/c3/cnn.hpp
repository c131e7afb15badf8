#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "c3/embedding.hpp"
#include "c3/errors.hpp"
#include "c3/linear.hpp"
#include "c3/rng.hpp"

namespace c3 {

// Convolutional text classifier: embed -> per-width valid convolution with
// rectifier -> global max-pool -> concatenate -> dropout -> affine to 2
// logits. Embeddings are frozen; all other parameters are trained with
// hand-derived gradients.

struct CnnTrainConfig {
  double dropout = 0.5;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 32;
  int epochs = 10;
  int max_seq_len = 400;
  std::uint64_t seed = 42;
  int filters_per_width = 128;
  std::vector<int> filter_widths = {3, 4, 5};

  void validate() const {
    if (!(dropout >= 0.0 && dropout < 1.0))
      throw ConfigError("cnn config: dropout must be in [0,1)");
    if (epochs < 1 || batch_size < 1 || filters_per_width < 1 || filter_widths.empty())
      throw ConfigError("cnn config: epochs, batch_size, filters and widths must be positive");
  }
};

struct FilterBank {
  int width = 0;
  Eigen::MatrixXd weights;  // n_filters x (width * embed_dim), row-major windows
  Eigen::VectorXd biases;   // n_filters
};

struct CnnParams {
  int embed_dim = 0;
  std::vector<FilterBank> banks;
  Eigen::MatrixXd fc_weights;  // 2 x total_filters; row 1 = constructive logit
  Eigen::VectorXd fc_biases;   // 2

  int total_filters() const {
    int n = 0;
    for (const auto& b : banks) n += static_cast<int>(b.weights.rows());
    return n;
  }
  int max_width() const {
    int w = 0;
    for (const auto& b : banks) w = std::max(w, b.width);
    return w;
  }

  CnnParams zeros_like() const {
    CnnParams g = *this;
    for (auto& b : g.banks) {
      b.weights.setZero();
      b.biases.setZero();
    }
    g.fc_weights.setZero();
    g.fc_biases.setZero();
    return g;
  }
};

inline CnnParams init_cnn(int embed_dim, const CnnTrainConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  CnnParams p;
  p.embed_dim = embed_dim;
  Rng rng(seed);
  for (int w : cfg.filter_widths) {
    FilterBank bank;
    bank.width = w;
    const int fan_in = w * embed_dim;
    const double scale = std::sqrt(2.0 / (fan_in + cfg.filters_per_width));
    bank.weights.resize(cfg.filters_per_width, fan_in);
    for (int i = 0; i < bank.weights.rows(); ++i)
      for (int j = 0; j < bank.weights.cols(); ++j)
        bank.weights(i, j) = scale * rng.gaussian();
    bank.biases = Eigen::VectorXd::Zero(cfg.filters_per_width);
    p.banks.push_back(std::move(bank));
  }
  const int total = p.total_filters();
  const double fc_scale = std::sqrt(2.0 / (total + 2));
  p.fc_weights.resize(2, total);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < total; ++j) p.fc_weights(i, j) = fc_scale * rng.gaussian();
  p.fc_biases = Eigen::VectorXd::Zero(2);
  return p;
}

// Tokens -> embedded rows, truncated to max_len and zero-padded up to the
// widest filter so every bank has at least one valid window.
inline Eigen::MatrixXd embed_tokens(const EmbeddingTable& emb,
                                    const std::vector<std::string>& tokens, int max_len,
                                    int min_rows) {
  if (tokens.empty()) throw UsageError("cnn: empty token list");
  const int n = std::min<int>(static_cast<int>(tokens.size()), max_len);
  const int rows = std::max(n, min_rows);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, emb.dim);
  for (int i = 0; i < n; ++i) {
    const int row = emb.row_of(tokens[i]);
    if (row >= 0) m.row(i) = emb.vectors.row(row);
  }
  return m;
}

struct CnnForwardCache {
  std::vector<Eigen::MatrixXd> windows;  // per bank: positions x (width*D)
  std::vector<std::vector<int>> argmax;  // per bank, per filter: winning position
  Eigen::VectorXd pooled;                // total_filters, post-rectifier maxima
  Eigen::VectorXd dropout_mask;          // 0 or 1/(1-p); ones in eval mode
  Eigen::Vector2d logits;
};

// Dropout masks come from an explicit seed so that training and the
// finite-difference checks can replay the exact same masks.
inline CnnForwardCache cnn_forward(const CnnParams& params, const Eigen::MatrixXd& embedded,
                                   bool train_mode, double dropout_rate,
                                   std::uint64_t dropout_mask_seed) {
  CnnForwardCache cache;
  const int total = params.total_filters();
  cache.pooled = Eigen::VectorXd::Zero(total);
  cache.windows.reserve(params.banks.size());
  cache.argmax.reserve(params.banks.size());

  int at = 0;
  for (const auto& bank : params.banks) {
    const int w = bank.width;
    const int d = params.embed_dim;
    const int positions = static_cast<int>(embedded.rows()) - w + 1;
    if (positions < 1)
      throw UsageError("cnn: sequence shorter than filter width after padding");
    Eigen::MatrixXd windows(positions, w * d);
    for (int pstart = 0; pstart < positions; ++pstart)
      for (int k = 0; k < w; ++k)
        windows.block(pstart, k * d, 1, d) = embedded.row(pstart + k);
    // responses: positions x n_filters, rectified
    Eigen::MatrixXd responses = (windows * bank.weights.transpose()).rowwise() +
                                bank.biases.transpose();
    responses = responses.cwiseMax(0.0);

    const int nf = static_cast<int>(bank.weights.rows());
    std::vector<int> arg(nf, 0);
    for (int f = 0; f < nf; ++f) {
      int best = 0;
      double best_v = responses(0, f);
      for (int pp = 1; pp < positions; ++pp)
        if (responses(pp, f) > best_v) {  // strict: first index wins ties
          best_v = responses(pp, f);
          best = pp;
        }
      arg[f] = best;
      cache.pooled[at + f] = best_v;
    }
    cache.windows.push_back(std::move(windows));
    cache.argmax.push_back(std::move(arg));
    at += nf;
  }

  cache.dropout_mask = Eigen::VectorXd::Ones(total);
  if (train_mode && dropout_rate > 0.0) {
    Rng rng(dropout_mask_seed);
    const double keep = 1.0 - dropout_rate;
    for (int i = 0; i < total; ++i)
      cache.dropout_mask[i] = rng.uniform() < keep ? 1.0 / keep : 0.0;
  }
  const Eigen::VectorXd dropped = cache.pooled.cwiseProduct(cache.dropout_mask);
  cache.logits = params.fc_weights * dropped + params.fc_biases;
  return cache;
}

inline Eigen::Vector2d softmax2(const Eigen::Vector2d& logits) {
  const double m = logits.maxCoeff();
  const Eigen::Vector2d e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

struct CnnExample {
  std::vector<std::string> tokens;
  int label = 0;  // 1 = constructive
};

// Mean softmax cross-entropy over the batch plus exact gradients for every
// trainable parameter. Max-pool routes the gradient to the first argmax
// position; the rectifier gate is closed when the pooled value is zero;
// embeddings stay frozen.
inline double cnn_loss_and_gradients(const CnnParams& params, const EmbeddingTable& emb,
                                     const std::vector<CnnExample>& batch,
                                     const CnnTrainConfig& cfg, bool train_mode,
                                     std::uint64_t mask_seed, CnnParams* grads) {
  if (batch.empty()) throw UsageError("cnn: empty batch");
  *grads = params.zeros_like();
  double total_loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  for (std::size_t bi = 0; bi < batch.size(); ++bi) {
    const CnnExample& ex = batch[bi];
    const Eigen::MatrixXd embedded =
        embed_tokens(emb, ex.tokens, cfg.max_seq_len, params.max_width());
    const CnnForwardCache cache = cnn_forward(params, embedded, train_mode, cfg.dropout,
                                              mask_seed + bi);
    const Eigen::Vector2d probs = softmax2(cache.logits);
    const int y = ex.label == 1 ? 1 : 0;
    total_loss += -std::log(std::max(probs[y], 1e-300));

    Eigen::Vector2d dlogits = probs;
    dlogits[y] -= 1.0;
    dlogits *= inv_b;

    const Eigen::VectorXd dropped = cache.pooled.cwiseProduct(cache.dropout_mask);
    grads->fc_weights += dlogits * dropped.transpose();
    grads->fc_biases += dlogits;
    const Eigen::VectorXd dpooled =
        (params.fc_weights.transpose() * dlogits).cwiseProduct(cache.dropout_mask);

    int at = 0;
    for (std::size_t b = 0; b < params.banks.size(); ++b) {
      const int nf = static_cast<int>(params.banks[b].weights.rows());
      for (int f = 0; f < nf; ++f) {
        const double g = dpooled[at + f];
        if (g == 0.0 || cache.pooled[at + f] <= 0.0) continue;
        grads->banks[b].weights.row(f) += g * cache.windows[b].row(cache.argmax[b][f]);
        grads->banks[b].biases[f] += g;
      }
      at += nf;
    }
  }
  return total_loss * inv_b;
}

// ---------------------------------------------------------------------------
// Adam training loop, deterministic under the config seed.

struct CnnEpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
};

struct TrainedCnn {
  CnnParams params;
  std::vector<CnnEpochLog> log;
};

inline double cnn_predict_proba(const CnnParams& params, const EmbeddingTable& emb,
                                const std::vector<std::string>& tokens, int max_seq_len) {
  const Eigen::MatrixXd embedded = embed_tokens(emb, tokens, max_seq_len, params.max_width());
  const CnnForwardCache cache = cnn_forward(params, embedded, false, 0.0, 0);
  return softmax2(cache.logits)[1];
}

inline TrainedCnn cnn_train(const std::vector<CnnExample>& examples,
                            const EmbeddingTable& emb, const CnnTrainConfig& cfg) {
  cfg.validate();
  bool has_pos = false, has_neg = false;
  for (const auto& ex : examples) (ex.label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw DataError("cnn_train: both classes must be present");

  TrainedCnn out;
  out.params = init_cnn(emb.dim, cfg, cfg.seed);
  CnnParams m = out.params.zeros_like();
  CnnParams v = out.params.zeros_like();
  CnnParams grads = out.params.zeros_like();
  double step_count = 0.0;

  // In-place Adam with bias correction over each tensor (param, m, v, grad).
  auto adam_update = [&](auto& p, auto& mm, auto& vv, const auto& g) {
    mm = cfg.beta1 * mm + (1.0 - cfg.beta1) * g;
    vv = cfg.beta2 * vv + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(cfg.beta1, step_count);
    const double bc2 = 1.0 - std::pow(cfg.beta2, step_count);
    p.array() -= cfg.learning_rate * (mm.array() / bc1) /
                 ((vv.array() / bc2).sqrt() + cfg.epsilon);
  };

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::vector<CnnExample> batch;
      for (std::size_t i = start; i < order.size() && i < start + cfg.batch_size; ++i)
        batch.push_back(examples[order[i]]);
      const std::uint64_t mask_seed =
          cfg.seed + 0x1000003ULL * (static_cast<std::uint64_t>(epoch) * 1000003ULL +
                                     start / cfg.batch_size + 1);
      const double loss = cnn_loss_and_gradients(out.params, emb, batch, cfg, true,
                                                 mask_seed, &grads);
      if (!std::isfinite(loss))
        throw DataError("cnn_train: non-finite loss at epoch " + std::to_string(epoch) +
                        ", batch " + std::to_string(batches));
      epoch_loss += loss;
      ++batches;
      step_count += 1.0;
      for (std::size_t b = 0; b < out.params.banks.size(); ++b) {
        adam_update(out.params.banks[b].weights, m.banks[b].weights, v.banks[b].weights,
                    grads.banks[b].weights);
        adam_update(out.params.banks[b].biases, m.banks[b].biases, v.banks[b].biases,
                    grads.banks[b].biases);
      }
      adam_update(out.params.fc_weights, m.fc_weights, v.fc_weights, grads.fc_weights);
      adam_update(out.params.fc_biases, m.fc_biases, v.fc_biases, grads.fc_biases);
    }
    CnnEpochLog log;
    log.epoch = epoch;
    log.mean_loss = batches > 0 ? epoch_loss / static_cast<double>(batches) : 0.0;
    std::size_t correct = 0;
    for (const auto& ex : examples) {
      const double p = cnn_predict_proba(out.params, emb, ex.tokens, cfg.max_seq_len);
      if ((p > 0.5) == (ex.label == 1)) ++correct;
    }
    log.train_accuracy = static_cast<double>(correct) / static_cast<double>(examples.size());
    out.log.push_back(log);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoint: versioned little-endian binary.
//   magic "C3CNN\x01" | u32 embed_dim | u32 n_banks
//   per bank: u32 width | u32 n_filters | weights (row-major f64) | biases
//   u32 fc_rows | u32 fc_cols | fc weights (row-major f64) | fc biases

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

inline void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(double));
      m(i, j) = v;
    }
}

}  // namespace detail

inline void save_cnn(const std::string& path, const CnnParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write checkpoint: " + path);
  out.write("C3CNN\x01", 6);
  detail::write_u32(out, static_cast<std::uint32_t>(params.embed_dim));
  detail::write_u32(out, static_cast<std::uint32_t>(params.banks.size()));
  for (const auto& b : params.banks) {
    detail::write_u32(out, static_cast<std::uint32_t>(b.width));
    detail::write_u32(out, static_cast<std::uint32_t>(b.weights.rows()));
    detail::write_matrix(out, b.weights);
    detail::write_matrix(out, b.biases);
  }
  detail::write_u32(out, static_cast<std::uint32_t>(params.fc_weights.rows()));
  detail::write_u32(out, static_cast<std::uint32_t>(params.fc_weights.cols()));
  detail::write_matrix(out, params.fc_weights);
  detail::write_matrix(out, params.fc_biases);
  if (!out) throw FileError("checkpoint write failed: " + path);
}

inline CnnParams load_cnn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open checkpoint: " + path);
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, "C3CNN\x01", 6) != 0)
    throw DataError("not a CNN checkpoint (bad magic): " + path);
  CnnParams p;
  p.embed_dim = static_cast<int>(detail::read_u32(in));
  const std::uint32_t n_banks = detail::read_u32(in);
  for (std::uint32_t i = 0; i < n_banks; ++i) {
    FilterBank b;
    b.width = static_cast<int>(detail::read_u32(in));
    const std::uint32_t nf = detail::read_u32(in);
    b.weights.resize(nf, b.width * p.embed_dim);
    b.biases.resize(nf);
    detail::read_matrix(in, b.weights);
    Eigen::MatrixXd bias_m(nf, 1);
    detail::read_matrix(in, bias_m);
    b.biases = bias_m.col(0);
    p.banks.push_back(std::move(b));
  }
  const std::uint32_t fr = detail::read_u32(in);
  const std::uint32_t fc = detail::read_u32(in);
  p.fc_weights.resize(fr, fc);
  detail::read_matrix(in, p.fc_weights);
  Eigen::MatrixXd fb(fr, 1);
  detail::read_matrix(in, fb);
  p.fc_biases = fb.col(0);
  if (!in) throw DataError("truncated checkpoint: " + path);
  return p;
}

}  // namespace c3
