#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "cofenet/labels.hpp"

namespace cofenet {

struct Span {
  int component;  // 0 source, 1 cue, 2 content
  int start;      // inclusive token index
  int end;        // exclusive

  bool operator==(const Span&) const = default;
  bool operator<(const Span& o) const {
    return std::tie(component, start, end) < std::tie(o.component, o.start, o.end);
  }
};

struct SpanSet {
  std::vector<Span> spans;
  int repairs = 0;  // illegal I-* patterns leniently opened as new spans
};

// Maximal B-x/I-x runs. An I-x with no live same-component span opens a new
// span at that token and counts as one repair.
SpanSet spans_from_bio(const std::vector<int>& labels);

// Inverse for legal (mutually non-overlapping) span sets; throws otherwise.
std::vector<int> bio_from_spans(const SpanSet& spans, int length);

struct Prf {
  long long tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct ComponentScores {
  Prf exact;
  Prf begin;
  double jaccard = 0.0;
  long long overlap_tokens = 0;  // micro pools behind the Jaccard value
  long long union_tokens = 0;
};

// Micro-averaged per-component exact (component,start,end) and begin
// (component,start) span matching.
std::array<ComponentScores, kNumComponents> exact_begin_scores(
    const std::vector<SpanSet>& gold, const std::vector<SpanSet>& pred);

// Token-set intersection over union per component. Micro pooling sums the
// per-sequence intersections and unions; macro averages per-sequence J over
// sequences where either side is non-empty.
std::array<double, kNumComponents> jaccard(const std::vector<SpanSet>& gold,
                                           const std::vector<SpanSet>& pred,
                                           bool macro = false);

// Row-stochastic previous->current matrix. Row 0 is <start>; row 1+l is
// label l. Rows whose source never occurs stay all-zero.
struct TransitionMatrix {
  std::array<std::array<double, kNumLabels>, kNumLabels + 1> rows{};
  std::array<long long, kNumLabels + 1> counts{};
};

TransitionMatrix transition_matrix(const std::vector<std::vector<int>>& label_sequences);
TransitionMatrix transition_margin(const TransitionMatrix& a, const TransitionMatrix& b);

// Mean attention vector per gold label class.
std::array<std::array<double, 4>, kNumLabels> attention_aggregate(
    const std::vector<std::array<double, 4>>& rows, const std::vector<int>& gold);

struct EvalReport {
  std::array<ComponentScores, kNumComponents> components;
  long long pred_repairs = 0;
  long long sequences = 0;
  long long tokens = 0;
  TransitionMatrix transition_gold;
  TransitionMatrix transition_pred;
  bool has_attention = false;
  std::array<std::array<double, 4>, kNumLabels> attention_means{};
};

// Builds the full report from label sequences (attention rows optional,
// flattened across the corpus in token order). Enforces the ordering law
// exact F1 <= begin F1 for every component.
EvalReport build_eval_report(const std::vector<std::vector<int>>& gold,
                             const std::vector<std::vector<int>>& pred,
                             const std::vector<std::array<double, 4>>* attention_rows = nullptr);

// Human-readable table in the per-component F1-E. / F1-B. / J layout.
std::string render_report_table(const EvalReport& report);

// One machine-readable record per component plus one summary record.
void write_report_records(std::ostream& out, const EvalReport& report,
                          const std::string& run_digest);

// 8x7 TSV, rows <start>+labels (storage orientation), or the transposed
// 7x8 print orientation with current labels as rows.
void write_transition_tsv(std::ostream& out, const TransitionMatrix& m,
                          bool paper_orientation);

}  // namespace cofenet
