#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "c3/csv.hpp"
#include "c3/errors.hpp"
#include "c3/rng.hpp"
#include "c3/tokenize.hpp"

namespace c3 {

// The ten crowd-annotated sub-characteristics, in canonical column order.
inline const std::array<std::string, 10>& subchar_names() {
  static const std::array<std::string, 10> names = {
      "solution",     "specific_points", "evidence",      "personal_story",
      "dialogue",     "non_relevant",    "no_respect",    "unsubstantial",
      "sarcastic",    "provocative"};
  return names;
}

inline bool is_known_subchar(const std::string& name) {
  const auto& names = subchar_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

struct RawComment {
  std::string id;
  std::string text;
  int annotator_count = 0;
  double constructive_fraction = 0.0;
  std::map<std::string, double> subchar_fractions;
  std::optional<double> agree_fraction;
  std::map<std::string, double> aux_scores;
};

enum class Label { non_constructive = 0, constructive = 1 };

inline const char* label_name(Label l) {
  return l == Label::constructive ? "constructive" : "non_constructive";
}

struct LabeledComment {
  RawComment raw;
  double score = 0.0;
  Label label = Label::non_constructive;
  std::size_t token_length = 0;
};

// score = aggregation fraction; constructive iff score > 0.5, strictly.
inline std::pair<double, Label> aggregate_label(double fraction) {
  if (fraction < 0.0 || fraction > 1.0)
    throw UsageError("aggregate_label: fraction outside [0,1]");
  return {fraction, fraction > 0.5 ? Label::constructive : Label::non_constructive};
}

inline LabeledComment make_labeled(RawComment raw) {
  LabeledComment c;
  auto [score, label] = aggregate_label(raw.constructive_fraction);
  c.score = score;
  c.label = label;
  c.token_length = token_length(raw.text);
  c.raw = std::move(raw);
  return c;
}

struct CorpusStats {
  std::size_t n_total = 0;
  std::size_t n_constructive = 0;
  std::size_t n_non_constructive = 0;
  std::size_t n_no_consensus = 0;  // 0.4 <= score <= 0.6, inclusive
  std::map<std::string, std::size_t> subchar_presence;  // fraction > 0
};

inline CorpusStats corpus_stats(const std::vector<LabeledComment>& comments) {
  if (comments.empty()) throw UsageError("corpus_stats: empty corpus");
  CorpusStats s;
  s.n_total = comments.size();
  for (const auto& c : comments) {
    if (c.label == Label::constructive)
      ++s.n_constructive;
    else
      ++s.n_non_constructive;
    if (c.score >= 0.4 && c.score <= 0.6) ++s.n_no_consensus;
    for (const auto& [name, frac] : c.raw.subchar_fractions)
      if (frac > 0.0) ++s.subchar_presence[name];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Column mapping: logical field -> CSV header. Kaggle and SFU releases use
// different header names, so nothing is hardcoded.

struct ColumnMapping {
  std::string id;
  std::string text;
  std::string constructive_fraction;
  std::string annotator_count;              // optional
  std::string agree_fraction;               // optional
  std::map<std::string, std::string> subchars;    // subchar name -> header
  std::map<std::string, std::string> aux;         // aux score name -> header

  void validate_for_c3() const {
    if (id.empty() || text.empty() || constructive_fraction.empty())
      throw ConfigError("column mapping: id, text and constructive_fraction are mandatory");
    for (const auto& [name, header] : subchars) {
      (void)header;
      if (!is_known_subchar(name))
        throw ConfigError("column mapping: unknown sub-characteristic '" + name + "'");
    }
  }
};

struct RowError {
  std::size_t row;  // 1-based data row number (header excluded)
  std::string message;
};

struct CsvLoadReport {
  std::vector<RawComment> comments;
  std::vector<RowError> errors;
  std::size_t rows_total = 0;

  // Fail loudly on schema drift, tolerate isolated encoding damage.
  bool over_tolerance() const {
    return rows_total > 0 && errors.size() * 100 > rows_total;
  }
};

namespace detail {

inline bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

inline bool parse_fraction(const std::string& s, double* out) {
  double v;
  if (!parse_double(s, &v)) return false;
  if (v < 0.0 || v > 1.0) return false;
  *out = v;
  return true;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space_char(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space_char(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// 17 significant digits: doubles survive the write/parse round trip.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline int require_column(const CsvTable& t, const std::string& header,
                          const std::string& logical) {
  const int idx = t.column(header);
  if (idx < 0)
    throw ConfigError("missing mandatory column '" + header + "' (mapped from " +
                      logical + ")");
  return idx;
}

}  // namespace detail

// Loads one comment per data row. Rows violating invariants go into the error
// report instead of being dropped silently.
inline CsvLoadReport load_c3_rows(const std::string& path, const ColumnMapping& mapping) {
  mapping.validate_for_c3();
  const CsvTable t = read_csv_file(path);

  const int col_id = detail::require_column(t, mapping.id, "id");
  const int col_text = detail::require_column(t, mapping.text, "text");
  const int col_frac =
      detail::require_column(t, mapping.constructive_fraction, "constructive_fraction");
  const int col_count =
      mapping.annotator_count.empty()
          ? -1
          : detail::require_column(t, mapping.annotator_count, "annotator_count");
  const int col_agree =
      mapping.agree_fraction.empty()
          ? -1
          : detail::require_column(t, mapping.agree_fraction, "agree_fraction");
  std::vector<std::pair<std::string, int>> subchar_cols, aux_cols;
  for (const auto& [name, header] : mapping.subchars)
    subchar_cols.emplace_back(name, detail::require_column(t, header, "subchar " + name));
  for (const auto& [name, header] : mapping.aux)
    aux_cols.emplace_back(name, detail::require_column(t, header, "aux " + name));

  CsvLoadReport report;
  report.rows_total = t.rows.size();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t rownum = r + 1;
    if (row.size() != t.header.size()) {
      report.errors.push_back({rownum, "field count mismatch"});
      continue;
    }
    RawComment c;
    c.id = row[col_id];
    c.text = row[col_text];
    std::string bad;
    if (detail::trim(c.text).empty()) bad = "empty text";
    if (bad.empty() && !detail::parse_fraction(row[col_frac], &c.constructive_fraction))
      bad = "unparseable constructive_fraction '" + row[col_frac] + "'";
    if (bad.empty() && col_count >= 0) {
      double v;
      if (!detail::parse_double(row[col_count], &v) || v < 0 || v != std::floor(v))
        bad = "unparseable annotator_count '" + row[col_count] + "'";
      else
        c.annotator_count = static_cast<int>(v);
    }
    if (bad.empty() && col_agree >= 0 && !row[col_agree].empty()) {
      double v;
      if (!detail::parse_fraction(row[col_agree], &v))
        bad = "unparseable agree_fraction '" + row[col_agree] + "'";
      else
        c.agree_fraction = v;
    }
    for (const auto& [name, col] : subchar_cols) {
      if (!bad.empty()) break;
      double v;
      if (!detail::parse_fraction(row[col], &v))
        bad = "unparseable fraction for sub-characteristic " + name;
      else
        c.subchar_fractions[name] = v;
    }
    for (const auto& [name, col] : aux_cols) {
      if (!bad.empty()) break;
      if (row[col].empty()) continue;  // absent score, not an error
      double v;
      if (!detail::parse_fraction(row[col], &v))
        bad = "unparseable fraction for aux score " + name;
      else
        c.aux_scores[name] = v;
    }
    if (!bad.empty())
      report.errors.push_back({rownum, bad});
    else
      report.comments.push_back(std::move(c));
  }
  return report;
}

inline std::vector<RawComment> load_c3_csv(const std::string& path,
                                           const ColumnMapping& mapping) {
  CsvLoadReport report = load_c3_rows(path, mapping);
  if (report.over_tolerance()) {
    std::string msg = "load aborted: " + std::to_string(report.errors.size()) + " of " +
                      std::to_string(report.rows_total) + " rows invalid (>1%)";
    for (std::size_t i = 0; i < report.errors.size() && i < 5; ++i)
      msg += "\n  row " + std::to_string(report.errors[i].row) + ": " +
             report.errors[i].message;
    throw DataError(msg);
  }
  return std::move(report.comments);
}

inline std::vector<LabeledComment> label_all(std::vector<RawComment> raws) {
  std::vector<LabeledComment> out;
  out.reserve(raws.size());
  for (auto& r : raws) out.push_back(make_labeled(std::move(r)));
  return out;
}

// Deterministic shuffle then split: train gets floor(n*(1-f)), test the rest.
inline std::pair<std::vector<LabeledComment>, std::vector<LabeledComment>>
split_train_test(const std::vector<LabeledComment>& comments, double test_fraction,
                 std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw UsageError("split_train_test: test_fraction must be in (0,1)");
  std::vector<std::size_t> idx(comments.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(comments.size()) * (1.0 - test_fraction)));
  std::pair<std::vector<LabeledComment>, std::vector<LabeledComment>> out;
  for (std::size_t i = 0; i < idx.size(); ++i)
    (i < n_train ? out.first : out.second).push_back(comments[idx[i]]);
  return out;
}

// External binary corpora (e.g. editor's picks as positives, non-constructive
// threads as negatives): every comment in pos_path gets score 1.0, every one
// in neg_path 0.0.
inline std::vector<LabeledComment> load_external_corpus(const std::string& pos_path,
                                                        const std::string& neg_path,
                                                        const ColumnMapping& mapping) {
  if (mapping.text.empty())
    throw ConfigError("external corpus mapping: text column is mandatory");
  auto load_side = [&](const std::string& path, double fraction,
                       const std::string& prefix) {
    const CsvTable t = read_csv_file(path);
    const int col_text = detail::require_column(t, mapping.text, "text");
    const int col_id = mapping.id.empty() ? -1 : t.column(mapping.id);
    CsvLoadReport report;
    report.rows_total = t.rows.size();
    std::vector<LabeledComment> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row.size() != t.header.size()) {
        report.errors.push_back({r + 1, "field count mismatch"});
        continue;
      }
      RawComment c;
      c.text = row[col_text];
      c.id = col_id >= 0 ? row[col_id] : prefix + std::to_string(r + 1);
      if (detail::trim(c.text).empty()) {
        report.errors.push_back({r + 1, "empty text"});
        continue;
      }
      c.constructive_fraction = fraction;
      out.push_back(make_labeled(std::move(c)));
    }
    if (report.over_tolerance())
      throw DataError("load aborted: >1% invalid rows in " + path);
    return out;
  };
  std::vector<LabeledComment> pos = load_side(pos_path, 1.0, "pos:");
  std::vector<LabeledComment> neg = load_side(neg_path, 0.0, "neg:");
  if (pos.empty() || neg.empty())
    throw DataError("external corpus: both classes required (pos=" +
                    std::to_string(pos.size()) + ", neg=" + std::to_string(neg.size()) +
                    ")");
  pos.insert(pos.end(), std::make_move_iterator(neg.begin()),
             std::make_move_iterator(neg.end()));
  return pos;
}

// ---------------------------------------------------------------------------
// Canonical CSV: id,text,score,label[,annotators][,agree],<subchars...>,<aux...>
// The optional columns appear when any comment carries them. Aux score
// columns get an "aux_" header prefix so a score and a sub-characteristic may
// share a name (both releases have an "unsubstantial"). Doubles are written
// with enough digits to reload bit-identically.

inline void write_canonical_csv(const std::string& path,
                                const std::vector<LabeledComment>& comments) {
  bool any_count = false, any_agree = false;
  std::set<std::string> subs, auxs;
  for (const auto& c : comments) {
    any_count |= c.raw.annotator_count > 0;
    any_agree |= c.raw.agree_fraction.has_value();
    for (const auto& [k, v] : c.raw.subchar_fractions) { (void)v; subs.insert(k); }
    for (const auto& [k, v] : c.raw.aux_scores) { (void)v; auxs.insert(k); }
  }
  std::vector<std::string> sub_order;
  for (const auto& name : subchar_names())
    if (subs.count(name)) sub_order.push_back(name);

  CsvTable t;
  t.header = {"id", "text", "score", "label"};
  if (any_count) t.header.push_back("annotators");
  if (any_agree) t.header.push_back("agree");
  for (const auto& s : sub_order) t.header.push_back(s);
  for (const auto& a : auxs) t.header.push_back("aux_" + a);

  for (const auto& c : comments) {
    std::vector<std::string> row = {c.raw.id, c.raw.text, detail::format_double(c.score),
                                    label_name(c.label)};
    if (any_count) row.push_back(std::to_string(c.raw.annotator_count));
    if (any_agree)
      row.push_back(c.raw.agree_fraction ? detail::format_double(*c.raw.agree_fraction)
                                         : "");
    for (const auto& s : sub_order) {
      auto it = c.raw.subchar_fractions.find(s);
      row.push_back(it == c.raw.subchar_fractions.end() ? "0"
                                                        : detail::format_double(it->second));
    }
    for (const auto& a : auxs) {
      auto it = c.raw.aux_scores.find(a);
      row.push_back(it == c.raw.aux_scores.end() ? "" : detail::format_double(it->second));
    }
    t.rows.push_back(std::move(row));
  }
  write_csv_file(path, t);
}

inline std::vector<LabeledComment> read_canonical_csv(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  ColumnMapping m;
  m.id = "id";
  m.text = "text";
  m.constructive_fraction = "score";
  if (t.column("annotators") >= 0) m.annotator_count = "annotators";
  if (t.column("agree") >= 0) m.agree_fraction = "agree";
  for (const auto& name : subchar_names())
    if (t.column(name) >= 0) m.subchars[name] = name;
  for (const auto& h : t.header) {
    if (h == "id" || h == "text" || h == "score" || h == "label" || h == "annotators" ||
        h == "agree" || is_known_subchar(h))
      continue;
    m.aux[h.rfind("aux_", 0) == 0 ? h.substr(4) : h] = h;
  }
  return label_all(load_c3_csv(path, m));
}

// ---------------------------------------------------------------------------
// Per-annotator rows. The public releases ship aggregated fractions; when raw
// annotation rows are supplied instead, this preprocessing averages them.

struct AnnotationRow {
  std::string comment_id;
  std::string batch;          // optional grouping for per-batch reliability
  std::string agree_answer;   // e.g. yes / no / partially / no_opinion
  int constructive = 0;       // 0 or 1
  std::map<std::string, int> subchar_flags;
};

struct AnnotationMapping {
  std::string comment_id;
  std::string constructive;
  std::string agree;   // optional
  std::string batch;   // optional
  std::map<std::string, std::string> subchars;  // optional

  void validate() const {
    if (comment_id.empty() || constructive.empty())
      throw ConfigError("annotation mapping: comment_id and constructive are mandatory");
    for (const auto& [name, header] : subchars) {
      (void)header;
      if (!is_known_subchar(name))
        throw ConfigError("annotation mapping: unknown sub-characteristic '" + name + "'");
    }
  }
};

namespace detail {

inline bool parse_binary_answer(std::string s, int* out) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "1" || s == "yes" || s == "true" || s == "constructive") { *out = 1; return true; }
  if (s == "0" || s == "no" || s == "false" || s == "non_constructive" ||
      s == "not_constructive") { *out = 0; return true; }
  return false;
}

}  // namespace detail

inline std::vector<AnnotationRow> load_annotation_rows(const std::string& path,
                                                       const AnnotationMapping& mapping) {
  mapping.validate();
  const CsvTable t = read_csv_file(path);
  const int col_id = detail::require_column(t, mapping.comment_id, "comment_id");
  const int col_con = detail::require_column(t, mapping.constructive, "constructive");
  const int col_agree = mapping.agree.empty() ? -1 : detail::require_column(t, mapping.agree, "agree");
  const int col_batch = mapping.batch.empty() ? -1 : detail::require_column(t, mapping.batch, "batch");
  std::vector<std::pair<std::string, int>> subchar_cols;
  for (const auto& [name, header] : mapping.subchars)
    subchar_cols.emplace_back(name, detail::require_column(t, header, "subchar " + name));

  std::vector<AnnotationRow> rows;
  std::vector<RowError> errors;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size()) {
      errors.push_back({r + 1, "field count mismatch"});
      continue;
    }
    AnnotationRow a;
    a.comment_id = row[col_id];
    if (!detail::parse_binary_answer(row[col_con], &a.constructive)) {
      errors.push_back({r + 1, "unparseable constructive answer '" + row[col_con] + "'"});
      continue;
    }
    if (col_agree >= 0) a.agree_answer = row[col_agree];
    if (col_batch >= 0) a.batch = row[col_batch];
    bool ok = true;
    for (const auto& [name, col] : subchar_cols) {
      int v;
      if (!detail::parse_binary_answer(row[col], &v)) {
        errors.push_back({r + 1, "unparseable flag for sub-characteristic " + name});
        ok = false;
        break;
      }
      a.subchar_flags[name] = v;
    }
    if (ok) rows.push_back(std::move(a));
  }
  if (!t.rows.empty() && errors.size() * 100 > t.rows.size())
    throw DataError("annotation load aborted: " + std::to_string(errors.size()) +
                    " invalid rows (>1%)");
  return rows;
}

// Which AGREE answers count as agreement/disagreement; the rest are excluded.
struct AgreeAnswerMapping {
  std::set<std::string> agree = {"yes"};
  std::set<std::string> disagree = {"no"};

  // -1 excluded, 0 disagree, 1 agree
  int classify(std::string answer) const {
    std::transform(answer.begin(), answer.end(), answer.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (agree.count(answer)) return 1;
    if (disagree.count(answer)) return 0;
    return -1;
  }
};

// Averages per-annotator rows into aggregation fractions. Texts are not part
// of annotation files; callers merge them from the comment table by id.
// agree_fraction = #agree / (#agree + #disagree) over mapped answers.
inline std::vector<RawComment> aggregate_annotations(
    const std::vector<AnnotationRow>& rows, const AgreeAnswerMapping& agree_map = {}) {
  std::map<std::string, std::vector<const AnnotationRow*>> by_id;
  for (const auto& r : rows) by_id[r.comment_id].push_back(&r);
  std::vector<RawComment> out;
  out.reserve(by_id.size());
  for (const auto& [id, group] : by_id) {
    RawComment c;
    c.id = id;
    c.annotator_count = static_cast<int>(group.size());
    double con_sum = 0.0;
    int n_agree = 0, n_disagree = 0;
    std::map<std::string, double> sub_sums;
    for (const AnnotationRow* a : group) {
      con_sum += a->constructive;
      const int cls = agree_map.classify(a->agree_answer);
      if (cls == 1) ++n_agree;
      if (cls == 0) ++n_disagree;
      for (const auto& [name, flag] : a->subchar_flags) sub_sums[name] += flag;
    }
    c.constructive_fraction = con_sum / static_cast<double>(group.size());
    if (n_agree + n_disagree > 0)
      c.agree_fraction = static_cast<double>(n_agree) /
                         static_cast<double>(n_agree + n_disagree);
    for (const auto& [name, sum] : sub_sums)
      c.subchar_fractions[name] = sum / static_cast<double>(group.size());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace c3
