#include "cofenet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cofenet {

SpanSet spans_from_bio(const std::vector<int>& labels) {
  SpanSet out;
  int open_component = -1;
  int open_start = -1;
  auto close = [&](int end) {
    if (open_component >= 0) {
      out.spans.push_back({open_component, open_start, end});
      open_component = -1;
    }
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || l >= kNumLabels) {
      throw std::invalid_argument("spans_from_bio: invalid label id " + std::to_string(l) +
                                  " at token " + std::to_string(i));
    }
    if (l == 0) {
      close(static_cast<int>(i));
      continue;
    }
    const int comp = component_of(l);
    if (is_begin(l)) {
      close(static_cast<int>(i));
      open_component = comp;
      open_start = static_cast<int>(i);
    } else if (comp == open_component) {
      continue;  // extends the live span
    } else {
      // orphan I-*: lenient repair opens a fresh span here
      close(static_cast<int>(i));
      open_component = comp;
      open_start = static_cast<int>(i);
      out.repairs += 1;
    }
  }
  close(static_cast<int>(labels.size()));
  return out;
}

std::vector<int> bio_from_spans(const SpanSet& spans, int length) {
  std::vector<int> labels(length, 0);
  std::vector<bool> taken(length, false);
  for (const Span& s : spans.spans) {
    if (s.start < 0 || s.end > length || s.start >= s.end) {
      throw std::invalid_argument("bio_from_spans: span [" + std::to_string(s.start) + "," +
                                  std::to_string(s.end) + ") out of range for length " +
                                  std::to_string(length));
    }
    for (int i = s.start; i < s.end; ++i) {
      if (taken[i]) {
        throw std::invalid_argument("bio_from_spans: overlapping spans at token " +
                                    std::to_string(i));
      }
      taken[i] = true;
      labels[i] = (i == s.start) ? begin_label(s.component) : inside_label(s.component);
    }
  }
  return labels;
}

namespace {

void finalize(Prf& p) {
  const double denom_p = static_cast<double>(p.tp + p.fp);
  const double denom_r = static_cast<double>(p.tp + p.fn);
  p.precision = denom_p > 0 ? p.tp / denom_p : 0.0;
  p.recall = denom_r > 0 ? p.tp / denom_r : 0.0;
  p.f1 = (p.precision + p.recall) > 0
             ? 2.0 * p.precision * p.recall / (p.precision + p.recall)
             : 0.0;
}

}  // namespace

std::array<ComponentScores, kNumComponents> exact_begin_scores(
    const std::vector<SpanSet>& gold, const std::vector<SpanSet>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("exact_begin_scores: corpus sizes differ: " +
                                std::to_string(gold.size()) + " vs " +
                                std::to_string(pred.size()));
  }
  std::array<ComponentScores, kNumComponents> out{};
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (int c = 0; c < kNumComponents; ++c) {
      std::set<std::pair<int, int>> g_exact, p_exact;
      std::set<int> g_begin, p_begin;
      for (const Span& sp : gold[s].spans) {
        if (sp.component != c) continue;
        g_exact.insert({sp.start, sp.end});
        g_begin.insert(sp.start);
      }
      for (const Span& sp : pred[s].spans) {
        if (sp.component != c) continue;
        p_exact.insert({sp.start, sp.end});
        p_begin.insert(sp.start);
      }
      long long tp_exact = 0;
      for (const auto& e : p_exact) tp_exact += g_exact.count(e);
      long long tp_begin = 0;
      for (int b : p_begin) tp_begin += g_begin.count(b);
      out[c].exact.tp += tp_exact;
      out[c].exact.fp += static_cast<long long>(p_exact.size()) - tp_exact;
      out[c].exact.fn += static_cast<long long>(g_exact.size()) - tp_exact;
      out[c].begin.tp += tp_begin;
      out[c].begin.fp += static_cast<long long>(p_begin.size()) - tp_begin;
      out[c].begin.fn += static_cast<long long>(g_begin.size()) - tp_begin;
    }
  }
  for (int c = 0; c < kNumComponents; ++c) {
    finalize(out[c].exact);
    finalize(out[c].begin);
  }
  return out;
}

namespace {

std::set<int> token_set(const SpanSet& spans, int component) {
  std::set<int> out;
  for (const Span& s : spans.spans) {
    if (s.component != component) continue;
    for (int i = s.start; i < s.end; ++i) out.insert(i);
  }
  return out;
}

}  // namespace

std::array<double, kNumComponents> jaccard(const std::vector<SpanSet>& gold,
                                           const std::vector<SpanSet>& pred, bool macro) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("jaccard: corpus sizes differ: " + std::to_string(gold.size()) +
                                " vs " + std::to_string(pred.size()));
  }
  std::array<double, kNumComponents> out{};
  for (int c = 0; c < kNumComponents; ++c) {
    long long inter = 0, uni = 0;
    double macro_sum = 0.0;
    long long macro_n = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
      const std::set<int> g = token_set(gold[s], c);
      const std::set<int> p = token_set(pred[s], c);
      if (g.empty() && p.empty()) continue;
      long long i_count = 0;
      for (int t : p) i_count += g.count(t);
      const long long u_count =
          static_cast<long long>(g.size()) + static_cast<long long>(p.size()) - i_count;
      inter += i_count;
      uni += u_count;
      macro_sum += static_cast<double>(i_count) / static_cast<double>(u_count);
      macro_n += 1;
    }
    if (macro) {
      out[c] = macro_n > 0 ? macro_sum / static_cast<double>(macro_n) : 1.0;
    } else {
      out[c] = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
    }
  }
  return out;
}

TransitionMatrix transition_matrix(const std::vector<std::vector<int>>& label_sequences) {
  if (label_sequences.empty()) {
    throw std::invalid_argument("transition_matrix: empty corpus");
  }
  TransitionMatrix m;
  std::array<std::array<long long, kNumLabels>, kNumLabels + 1> counts{};
  for (const auto& seq : label_sequences) {
    int prev_row = 0;  // <start>
    for (int l : seq) {
      if (l < 0 || l >= kNumLabels) {
        throw std::invalid_argument("transition_matrix: invalid label id " + std::to_string(l));
      }
      counts[prev_row][l] += 1;
      prev_row = 1 + l;
    }
  }
  for (int r = 0; r <= kNumLabels; ++r) {
    long long total = 0;
    for (int c = 0; c < kNumLabels; ++c) total += counts[r][c];
    m.counts[r] = total;
    if (total > 0) {
      for (int c = 0; c < kNumLabels; ++c) {
        m.rows[r][c] = static_cast<double>(counts[r][c]) / static_cast<double>(total);
      }
    }
  }
  return m;
}

TransitionMatrix transition_margin(const TransitionMatrix& a, const TransitionMatrix& b) {
  TransitionMatrix m;
  for (int r = 0; r <= kNumLabels; ++r) {
    m.counts[r] = a.counts[r] - b.counts[r];
    for (int c = 0; c < kNumLabels; ++c) m.rows[r][c] = a.rows[r][c] - b.rows[r][c];
  }
  return m;
}

std::array<std::array<double, 4>, kNumLabels> attention_aggregate(
    const std::vector<std::array<double, 4>>& rows, const std::vector<int>& gold) {
  if (rows.size() != gold.size()) {
    throw std::invalid_argument("attention_aggregate: " + std::to_string(rows.size()) +
                                " rows for " + std::to_string(gold.size()) + " labels");
  }
  std::array<std::array<double, 4>, kNumLabels> sums{};
  std::array<long long, kNumLabels> counts{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int l = gold[i];
    if (l < 0 || l >= kNumLabels) {
      throw std::invalid_argument("attention_aggregate: invalid label id " + std::to_string(l));
    }
    for (int s = 0; s < 4; ++s) sums[l][s] += rows[i][s];
    counts[l] += 1;
  }
  for (int l = 0; l < kNumLabels; ++l) {
    if (counts[l] > 0) {
      for (int s = 0; s < 4; ++s) sums[l][s] /= static_cast<double>(counts[l]);
    }
  }
  return sums;
}

EvalReport build_eval_report(const std::vector<std::vector<int>>& gold,
                             const std::vector<std::vector<int>>& pred,
                             const std::vector<std::array<double, 4>>* attention_rows) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("build_eval_report: corpus sizes differ");
  }
  EvalReport report;
  report.sequences = static_cast<long long>(gold.size());
  std::vector<SpanSet> gold_spans, pred_spans;
  std::vector<int> flat_gold;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size()) {
      throw std::invalid_argument("build_eval_report: length mismatch at sequence " +
                                  std::to_string(s));
    }
    report.tokens += static_cast<long long>(gold[s].size());
    gold_spans.push_back(spans_from_bio(gold[s]));
    pred_spans.push_back(spans_from_bio(pred[s]));
    report.pred_repairs += pred_spans.back().repairs;
    flat_gold.insert(flat_gold.end(), gold[s].begin(), gold[s].end());
  }
  report.components = exact_begin_scores(gold_spans, pred_spans);
  const auto j = jaccard(gold_spans, pred_spans, false);
  for (int c = 0; c < kNumComponents; ++c) {
    report.components[c].jaccard = j[c];
    long long inter = 0, uni = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
      const std::set<int> g = token_set(gold_spans[s], c);
      const std::set<int> p = token_set(pred_spans[s], c);
      long long i_count = 0;
      for (int t : p) i_count += g.count(t);
      inter += i_count;
      uni += static_cast<long long>(g.size()) + static_cast<long long>(p.size()) - i_count;
    }
    report.components[c].overlap_tokens = inter;
    report.components[c].union_tokens = uni;
  }
  report.transition_gold = transition_matrix(gold);
  report.transition_pred = transition_matrix(pred);
  if (attention_rows != nullptr) {
    report.has_attention = true;
    report.attention_means = attention_aggregate(*attention_rows, flat_gold);
  }
  // ordering law: an exact match is always a begin match
  for (int c = 0; c < kNumComponents; ++c) {
    if (report.components[c].exact.f1 > report.components[c].begin.f1 + 1e-12) {
      throw std::logic_error("eval report: exact F1 exceeds begin F1 for component " +
                             kComponentNames[c]);
    }
  }
  return report;
}

std::string render_report_table(const EvalReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1);
  os << "            |  Source              |  Cue                 |  Content\n";
  os << "            |  F1-E.  F1-B.  J     |  F1-E.  F1-B.  J     |  F1-E.  F1-B.  J\n";
  os << "  ----------+----------------------+----------------------+------------------\n";
  os << "  scores    |";
  for (int c = 0; c < kNumComponents; ++c) {
    os << "  " << std::setw(5) << 100.0 * report.components[c].exact.f1 << "  " << std::setw(5)
       << 100.0 * report.components[c].begin.f1 << "  " << std::setw(5)
       << 100.0 * report.components[c].jaccard << (c + 1 < kNumComponents ? " |" : "");
  }
  os << "\n";
  os << "  sequences: " << report.sequences << ", tokens: " << report.tokens
     << ", prediction repairs: " << report.pred_repairs << "\n";
  return os.str();
}

void write_report_records(std::ostream& out, const EvalReport& report,
                          const std::string& run_digest) {
  for (int c = 0; c < kNumComponents; ++c) {
    nlohmann::json rec;
    rec["record"] = "component_scores";
    rec["component"] = kComponentNames[c];
    rec["exact"] = {{"precision", report.components[c].exact.precision},
                    {"recall", report.components[c].exact.recall},
                    {"f1", report.components[c].exact.f1},
                    {"tp", report.components[c].exact.tp},
                    {"fp", report.components[c].exact.fp},
                    {"fn", report.components[c].exact.fn}};
    rec["begin"] = {{"precision", report.components[c].begin.precision},
                    {"recall", report.components[c].begin.recall},
                    {"f1", report.components[c].begin.f1},
                    {"tp", report.components[c].begin.tp},
                    {"fp", report.components[c].begin.fp},
                    {"fn", report.components[c].begin.fn}};
    rec["jaccard"] = report.components[c].jaccard;
    rec["digest"] = run_digest;
    out << rec.dump() << "\n";
  }
  nlohmann::json summary;
  summary["record"] = "summary";
  summary["sequences"] = report.sequences;
  summary["tokens"] = report.tokens;
  summary["pred_repairs"] = report.pred_repairs;
  summary["digest"] = run_digest;
  out << summary.dump() << "\n";
}

void write_transition_tsv(std::ostream& out, const TransitionMatrix& m,
                          bool paper_orientation) {
  std::array<std::string, kNumLabels + 1> row_names;
  row_names[0] = "<start>";
  for (int l = 0; l < kNumLabels; ++l) row_names[1 + l] = kLabelNames[l];

  if (!paper_orientation) {
    // storage orientation: 8 rows (previous), 7 columns (current)
    out << "prev\\cur";
    for (int c = 0; c < kNumLabels; ++c) out << '\t' << kLabelNames[c];
    out << '\n';
    for (int r = 0; r <= kNumLabels; ++r) {
      out << row_names[r];
      for (int c = 0; c < kNumLabels; ++c) out << '\t' << m.rows[r][c];
      out << '\n';
    }
  } else {
    // printed as in the figures: rows = current label, columns = previous
    out << "cur\\prev";
    for (int r = 0; r <= kNumLabels; ++r) out << '\t' << row_names[r];
    out << '\n';
    for (int c = 0; c < kNumLabels; ++c) {
      out << kLabelNames[c];
      for (int r = 0; r <= kNumLabels; ++r) out << '\t' << m.rows[r][c];
      out << '\n';
    }
  }
}

}  // namespace cofenet
