#pragma once

// Synthetic labeled corpora for tests. Constructiveness is driven by marker
// tokens while comment length is confounded with the label, mirroring the
// structure that makes length-hungry models overfit. Deterministic per seed.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "c3/corpus.hpp"
#include "c3/rng.hpp"

namespace synth {

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "the",    "city",   "report", "people", "money",  "plan",   "street", "house",
      "school", "game",   "team",   "road",   "paper",  "budget", "mayor",  "price",
      "water",  "park",   "store",  "child",  "family", "friend", "night",  "story",
      "music",  "letter", "window", "garden", "market", "bridge", "river",  "train",
      "doctor", "animal", "winter", "summer", "office", "corner", "ticket", "coffee"};
  return words;
}

inline const std::vector<std::string>& positive_markers() {
  static const std::vector<std::string> words = {"evidence", "propose", "solution",
                                                 "therefore", "research"};
  return words;
}

inline const std::vector<std::string>& negative_markers() {
  static const std::vector<std::string> words = {"nonsense", "boring", "whatever",
                                                 "garbage", "lol"};
  return words;
}

struct SynthConfig {
  std::size_t n = 600;
  double marker_rate = 0.9;    // chance the class marker actually appears
  double mean_len_pos = 55.0;  // constructive comments run longer
  double mean_len_neg = 18.0;
  bool aux_scores = true;
  bool subchar_fractions = true;
};

inline std::vector<c3::LabeledComment> make_corpus(const SynthConfig& cfg,
                                                   std::uint64_t seed) {
  c3::Rng rng(seed);
  std::vector<c3::LabeledComment> out;
  out.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const bool pos = rng.uniform() < 0.5;
    const double mean_len = pos ? cfg.mean_len_pos : cfg.mean_len_neg;
    int len = static_cast<int>(std::lround(mean_len + 0.45 * mean_len * rng.gaussian()));
    len = std::max(4, std::min(len, 220));

    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k)
      tokens.push_back(filler_words()[rng.below(filler_words().size())]);
    const auto& markers = pos ? positive_markers() : negative_markers();
    if (rng.uniform() < cfg.marker_rate) {
      const int m = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < m; ++k)
        tokens[rng.below(tokens.size())] = markers[rng.below(markers.size())];
    } else if (rng.uniform() < 0.3) {
      // cross-talk noise: a marker from the wrong class
      const auto& wrong = pos ? negative_markers() : positive_markers();
      tokens[rng.below(tokens.size())] = wrong[rng.below(wrong.size())];
    }

    std::string text;
    int since_period = 0;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      std::string w = tokens[k];
      if (k == 0 || since_period == 0) w[0] = static_cast<char>(std::toupper(w[0]));
      if (!text.empty()) text += " ";
      text += w;
      ++since_period;
      if (since_period >= 12 || k + 1 == tokens.size()) {
        text += ".";
        since_period = 0;
      }
    }

    c3::RawComment raw;
    raw.id = "syn" + std::to_string(i);
    raw.text = text;
    raw.annotator_count = 4;
    const double jitter = 0.2 * rng.uniform();
    raw.constructive_fraction = pos ? 0.75 + jitter - 0.1 : 0.25 - jitter + 0.1;
    raw.constructive_fraction = std::min(1.0, std::max(0.0, raw.constructive_fraction));
    if (raw.constructive_fraction == 0.5) raw.constructive_fraction = pos ? 0.55 : 0.45;

    if (cfg.aux_scores) {
      auto noise = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
      raw.aux_scores["toxicity"] = noise(0.0, 0.4);
      raw.aux_scores["severe_toxicity"] = noise(0.0, 0.2);
      raw.aux_scores["sexually_explicit"] = noise(0.0, 0.1);
      raw.aux_scores["identity_hate"] = noise(0.0, 0.1);
      raw.aux_scores["insults"] = pos ? noise(0.0, 0.2) : noise(0.1, 0.6);
      raw.aux_scores["obscenity"] = noise(0.0, 0.2);
      raw.aux_scores["threats"] = noise(0.0, 0.1);
      raw.aux_scores["inflammatory"] = pos ? noise(0.0, 0.3) : noise(0.1, 0.7);
      raw.aux_scores["coherence"] = pos ? noise(0.5, 1.0) : noise(0.0, 0.6);
      raw.aux_scores["unsubstantial"] = pos ? noise(0.0, 0.4) : noise(0.4, 1.0);
      raw.aux_scores["spam"] = noise(0.0, 0.3);
      raw.aux_scores["attack_author"] = pos ? noise(0.0, 0.2) : noise(0.0, 0.5);
      raw.aux_scores["attack_commenter"] = noise(0.0, 0.3);
      raw.aux_scores["attack_publisher"] = noise(0.0, 0.2);
      raw.agree_fraction = std::min(
          1.0, std::max(0.0, 0.3 + 0.4 * raw.constructive_fraction +
                                 0.15 * rng.gaussian()));
    }
    if (cfg.subchar_fractions) {
      auto frac = [&](double base) {
        return std::min(1.0, std::max(0.0, base + 0.2 * rng.gaussian()));
      };
      const double p = pos ? 0.7 : 0.15;
      const double q = pos ? 0.15 : 0.7;
      raw.subchar_fractions["dialogue"] = frac(pos ? 0.8 : 0.1);
      raw.subchar_fractions["solution"] = frac(p);
      raw.subchar_fractions["specific_points"] = frac(p);
      raw.subchar_fractions["evidence"] = frac(p);
      raw.subchar_fractions["personal_story"] = frac(pos ? 0.5 : 0.1);
      raw.subchar_fractions["unsubstantial"] = frac(pos ? 0.05 : 0.85);
      raw.subchar_fractions["non_relevant"] = frac(q);
      raw.subchar_fractions["sarcastic"] = frac(q);
      raw.subchar_fractions["no_respect"] = frac(pos ? 0.1 : 0.5);
      raw.subchar_fractions["provocative"] = frac(pos ? 0.2 : 0.5);
    }
    out.push_back(c3::make_labeled(std::move(raw)));
  }
  return out;
}

}  // namespace synth
