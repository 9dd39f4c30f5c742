#pragma once

#include <array>
#include <string>
#include <vector>

#include "cofenet/labels.hpp"
#include "cofenet/rng.hpp"
#include "cofenet/tensor.hpp"

namespace cofenet {

// The four information sources feeding the enhanced cell, in fixed order.
enum Source : int {
  kSrcFormerLabels = 0,
  kSrcFormerWords = 1,
  kSrcCurrentWord = 2,
  kSrcLatterWords = 3,
};
constexpr int kNumSources = 4;

struct CofeConfig {
  int former_labels = 1;   // k
  int former_words = 3;    // m
  int latter_words = 3;    // n
  int cell_size = 100;     // d
  int label_embed_dim = 100;  // d_e
  int input_size = 100;    // encoder hidden size H

  bool use_gate = true;
  bool use_attention = true;
  bool use_former_labels = true;
  bool use_former_words = true;
  bool use_current_word = true;
  bool use_latter_words = true;

  bool source_enabled(int s) const;
  std::vector<int> enabled_sources() const;  // subset of {0..3}, ascending
  int arity() const { return static_cast<int>(enabled_sources().size()); }
  void validate() const;  // k,m,n >= 0 and at least one source enabled
};

// Every learnable weight of the cell. Disabled sources own no parameters:
// disabling one removes its composer pair and gate pair and shrinks the
// attention projection's arity. The label-embedding table is always
// allocated (8 rows: 7 labels + <start>).
struct CofeParams {
  CofeConfig config;

  Tensor label_embedding;  // [8 x d_e]

  Tensor w_labels, b_labels;    // [k*d_e x d], [1 x d]
  Tensor w_former, b_former;    // [m*H x d]
  Tensor w_current, b_current;  // [H x d]
  Tensor w_latter, b_latter;    // [n*H x d]

  std::array<Tensor, kNumSources> gate_w;  // each [2d x d]
  std::array<Tensor, kNumSources> gate_b;  // each [1 x d]

  Tensor w_attention, b_attention;  // [2d x arity], [1 x arity]
  Tensor w_assign, b_assign;        // [d x 7], [1 x 7]

  static CofeParams init(const CofeConfig& config, Rng& rng);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

struct ComposeOut {
  Tensor labels;   // h_i^y
  Tensor former;   // h_i^f
  Tensor current;  // h_i^c
  Tensor latter;   // h_i^l
};

struct GateOut {
  Tensor labels, former, current, latter;  // r_i^y, r_i^f, r_i^c, r_i^l
};

struct AttendOut {
  Tensor combined;                  // r_i
  std::array<double, 4> weights;    // alpha in source order; 0 for disabled
};

// Composer layer: one gelu linear per source. The former-label window must
// hold exactly k ids (callers pad with <start> before position k); hidden
// rows outside [0, N) contribute zero padding.
ComposeOut compose(const std::vector<int>& former_labels, const Tensor& hidden, int position,
                   const CofeParams& params);

// Gate layer: r_s = h_s (.) sigmoid([h^y, h^c] Wz_s + bz_s). Identity
// pass-through when use_gate is off.
GateOut gate(const ComposeOut& h, const CofeParams& params);

// Attention layer: weights from softmax([h^y, h^c] Ww + bw) over the
// enabled sources; with attention off, the plain average of the enabled
// adjusted states (weights reported uniform).
AttendOut attend(const GateOut& r, const ComposeOut& h, const CofeParams& params);

// Label assigner: P = softmax(r Wp + bp); argmax with lowest-index ties.
struct AssignOut {
  Tensor probs;  // [1 x 7]
  int label;
};
AssignOut assign(const Tensor& combined, const CofeParams& params);

// One full enhanced-cell evaluation at a position.
struct CellStep {
  Tensor probs;                   // [1 x 7]
  std::array<double, 4> attention;
  int predicted;
};
CellStep cell_step(const Tensor& hidden, int position, const std::vector<int>& former_labels,
                   const CofeParams& params);

// Left-to-right greedy decode; position i consumes the labels already
// predicted at i-k..i-1 (<start>-padded).
struct DecodeResult {
  std::vector<int> labels;
  Tensor probs;      // [N x 7]
  Tensor attention;  // [N x 4]
};
DecodeResult decode_sequence(const Tensor& hidden, const CofeParams& params);

// The k former-label ids for a position given the labels assigned so far.
std::vector<int> former_label_window(const std::vector<int>& assigned, int position, int k);

}  // namespace cofenet
