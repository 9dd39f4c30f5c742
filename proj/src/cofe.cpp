#include "cofenet/cofe.hpp"

#include <cmath>
#include <stdexcept>

#include "cofenet/ops.hpp"

namespace cofenet {

namespace {

Tensor xavier(int rows, int cols, Rng& rng) {
  Tensor t(rows, cols);
  const double limit = std::sqrt(6.0 / (std::max(rows, 1) + cols));
  for (double& v : t.vals()) v = rng.uniform(-limit, limit);
  return t;
}

// Window of hidden rows [first, first+count), zero rows outside [0, N).
Tensor hidden_window(const Tensor& hidden, int first, int count) {
  if (count == 0) return Tensor(1, 0);
  const Tensor zero_row(1, hidden.cols());
  std::vector<const Tensor*> parts;
  std::vector<Tensor> slices;
  slices.reserve(count);
  for (int j = first; j < first + count; ++j) {
    if (j < 0 || j >= hidden.rows()) {
      slices.push_back(zero_row);
    } else {
      slices.push_back(select_row(hidden, j));
    }
  }
  for (const Tensor& s : slices) parts.push_back(&s);
  return concat(parts, 1);
}

Tensor composer_branch(const Tensor& window, const Tensor& w, const Tensor& b) {
  return gelu(add(matmul(window, w), b));
}

}  // namespace

bool CofeConfig::source_enabled(int s) const {
  switch (s) {
    case kSrcFormerLabels: return use_former_labels;
    case kSrcFormerWords: return use_former_words;
    case kSrcCurrentWord: return use_current_word;
    case kSrcLatterWords: return use_latter_words;
    default: return false;
  }
}

std::vector<int> CofeConfig::enabled_sources() const {
  std::vector<int> out;
  for (int s = 0; s < kNumSources; ++s) {
    if (source_enabled(s)) out.push_back(s);
  }
  return out;
}

void CofeConfig::validate() const {
  if (former_labels < 0 || former_words < 0 || latter_words < 0) {
    throw std::invalid_argument("cofe config: window sizes must be >= 0");
  }
  if (cell_size <= 0 || label_embed_dim <= 0 || input_size <= 0) {
    throw std::invalid_argument("cofe config: dimensions must be positive");
  }
  if (enabled_sources().empty()) {
    throw std::invalid_argument("cofe config: at least one information source must be enabled");
  }
}

CofeParams CofeParams::init(const CofeConfig& config, Rng& rng) {
  config.validate();
  CofeParams p;
  p.config = config;
  const int d = config.cell_size;
  const int h = config.input_size;

  p.label_embedding = Tensor(kNumLabels + 1, config.label_embed_dim);
  for (double& v : p.label_embedding.vals()) v = rng.uniform(-0.1, 0.1);

  if (config.use_former_labels) {
    p.w_labels = xavier(config.former_labels * config.label_embed_dim, d, rng);
    p.b_labels = Tensor(1, d);
  }
  if (config.use_former_words) {
    p.w_former = xavier(config.former_words * h, d, rng);
    p.b_former = Tensor(1, d);
  }
  if (config.use_current_word) {
    p.w_current = xavier(h, d, rng);
    p.b_current = Tensor(1, d);
  }
  if (config.use_latter_words) {
    p.w_latter = xavier(config.latter_words * h, d, rng);
    p.b_latter = Tensor(1, d);
  }
  if (config.use_gate) {
    for (int s : config.enabled_sources()) {
      p.gate_w[s] = xavier(2 * d, d, rng);
      p.gate_b[s] = Tensor(1, d);
    }
  }
  if (config.use_attention) {
    p.w_attention = xavier(2 * d, config.arity(), rng);
    p.b_attention = Tensor(1, config.arity());
  }
  p.w_assign = xavier(d, kNumLabels, rng);
  p.b_assign = Tensor(1, kNumLabels);
  return p;
}

void CofeParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".label_embedding", &label_embedding});
  if (config.use_former_labels) {
    out.push_back({prefix + ".composer.w_labels", &w_labels});
    out.push_back({prefix + ".composer.b_labels", &b_labels});
  }
  if (config.use_former_words) {
    out.push_back({prefix + ".composer.w_former", &w_former});
    out.push_back({prefix + ".composer.b_former", &b_former});
  }
  if (config.use_current_word) {
    out.push_back({prefix + ".composer.w_current", &w_current});
    out.push_back({prefix + ".composer.b_current", &b_current});
  }
  if (config.use_latter_words) {
    out.push_back({prefix + ".composer.w_latter", &w_latter});
    out.push_back({prefix + ".composer.b_latter", &b_latter});
  }
  if (config.use_gate) {
    static const char* kSourceKeys[kNumSources] = {"labels", "former", "current", "latter"};
    for (int s : config.enabled_sources()) {
      out.push_back({prefix + ".gate.w_" + kSourceKeys[s], &gate_w[s]});
      out.push_back({prefix + ".gate.b_" + kSourceKeys[s], &gate_b[s]});
    }
  }
  if (config.use_attention) {
    out.push_back({prefix + ".attention.w", &w_attention});
    out.push_back({prefix + ".attention.b", &b_attention});
  }
  out.push_back({prefix + ".assigner.w", &w_assign});
  out.push_back({prefix + ".assigner.b", &b_assign});
}

ComposeOut compose(const std::vector<int>& former_labels, const Tensor& hidden, int position,
                   const CofeParams& params) {
  const CofeConfig& cfg = params.config;
  if (position < 0 || position >= hidden.rows()) {
    throw std::out_of_range("compose: position " + std::to_string(position) +
                            " out of range for " + std::to_string(hidden.rows()) + " tokens");
  }
  if (static_cast<int>(former_labels.size()) != cfg.former_labels) {
    throw std::invalid_argument("compose: expected " + std::to_string(cfg.former_labels) +
                                " former labels, got " + std::to_string(former_labels.size()));
  }

  ComposeOut out;
  const Tensor zero(1, cfg.cell_size);

  if (cfg.use_former_labels) {
    Tensor window = cfg.former_labels > 0
                        ? reshape_row(gather_rows(params.label_embedding, former_labels))
                        : Tensor(1, 0);
    out.labels = composer_branch(window, params.w_labels, params.b_labels);
  } else {
    out.labels = zero;
  }

  if (cfg.use_former_words) {
    Tensor window = hidden_window(hidden, position - cfg.former_words, cfg.former_words);
    out.former = composer_branch(window, params.w_former, params.b_former);
  } else {
    out.former = zero;
  }

  if (cfg.use_current_word) {
    out.current = composer_branch(select_row(hidden, position), params.w_current,
                                  params.b_current);
  } else {
    out.current = zero;
  }

  if (cfg.use_latter_words) {
    Tensor window = hidden_window(hidden, position + 1, cfg.latter_words);
    out.latter = composer_branch(window, params.w_latter, params.b_latter);
  } else {
    out.latter = zero;
  }
  return out;
}

GateOut gate(const ComposeOut& h, const CofeParams& params) {
  const CofeConfig& cfg = params.config;
  if (!cfg.use_gate) {
    return GateOut{h.labels, h.former, h.current, h.latter};
  }
  Tensor query = concat({&h.labels, &h.current}, 1);
  const Tensor* sources[kNumSources] = {&h.labels, &h.former, &h.current, &h.latter};
  GateOut out{h.labels, h.former, h.current, h.latter};
  Tensor* adjusted[kNumSources] = {&out.labels, &out.former, &out.current, &out.latter};
  for (int s : cfg.enabled_sources()) {
    Tensor z = sigmoid(add(matmul(query, params.gate_w[s]), params.gate_b[s]));
    *adjusted[s] = mul(*sources[s], z);
  }
  return out;
}

AttendOut attend(const GateOut& r, const ComposeOut& h, const CofeParams& params) {
  const CofeConfig& cfg = params.config;
  const std::vector<int> enabled = cfg.enabled_sources();
  const Tensor* adjusted[kNumSources] = {&r.labels, &r.former, &r.current, &r.latter};

  AttendOut out;
  out.weights = {0.0, 0.0, 0.0, 0.0};

  std::vector<const Tensor*> parts;
  parts.reserve(enabled.size());
  for (int s : enabled) parts.push_back(adjusted[s]);

  if (cfg.use_attention) {
    Tensor query = concat({&h.labels, &h.current}, 1);
    Tensor alpha = softmax(add(matmul(query, params.w_attention), params.b_attention), 1);
    out.combined = weighted_sum(alpha, parts);
    for (std::size_t j = 0; j < enabled.size(); ++j) {
      out.weights[enabled[j]] = alpha.at(0, static_cast<int>(j));
    }
  } else {
    Tensor sum = *parts[0];
    for (std::size_t j = 1; j < parts.size(); ++j) sum = add(sum, *parts[j]);
    out.combined = scale(sum, 1.0 / static_cast<double>(parts.size()));
    for (int s : enabled) out.weights[s] = 1.0 / static_cast<double>(enabled.size());
  }
  return out;
}

AssignOut assign(const Tensor& combined, const CofeParams& params) {
  AssignOut out;
  out.probs = softmax(add(matmul(combined, params.w_assign), params.b_assign), 1);
  out.label = argmax_row(out.probs, 0);
  return out;
}

CellStep cell_step(const Tensor& hidden, int position, const std::vector<int>& former_labels,
                   const CofeParams& params) {
  ComposeOut h = compose(former_labels, hidden, position, params);
  GateOut r = gate(h, params);
  AttendOut a = attend(r, h, params);
  AssignOut s = assign(a.combined, params);
  return CellStep{s.probs, a.weights, s.label};
}

std::vector<int> former_label_window(const std::vector<int>& assigned, int position, int k) {
  std::vector<int> out;
  out.reserve(k);
  for (int j = position - k; j < position; ++j) {
    out.push_back(j < 0 ? kStartLabel : assigned[j]);
  }
  return out;
}

DecodeResult decode_sequence(const Tensor& hidden, const CofeParams& params) {
  const int n = hidden.rows();
  if (n < 1) {
    throw std::invalid_argument("decode_sequence: empty hidden matrix");
  }
  DecodeResult result;
  result.attention = Tensor(n, kNumSources);
  std::vector<Tensor> prob_rows;
  prob_rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::vector<int> former =
        former_label_window(result.labels, i, params.config.former_labels);
    CellStep step = cell_step(hidden, i, former, params);
    result.labels.push_back(step.predicted);
    for (int s = 0; s < kNumSources; ++s) result.attention.at(i, s) = step.attention[s];
    prob_rows.push_back(step.probs);
  }
  result.probs = concat(prob_rows, 0);
  return result;
}

}  // namespace cofenet
