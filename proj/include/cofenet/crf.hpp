#pragma once

#include <string>
#include <vector>

#include "cofenet/labels.hpp"
#include "cofenet/rng.hpp"
#include "cofenet/tensor.hpp"

namespace cofenet {

// Linear-chain CRF head. Transition scores live in a [9x9] matrix over the
// 7 assignable labels plus START (row source only) and STOP (column sink
// only); entries into START and out of STOP are pinned at a large negative
// constant rather than -inf so gradients stay finite.
constexpr int kCrfStart = kNumLabels;      // 7
constexpr int kCrfStop = kNumLabels + 1;   // 8
constexpr int kCrfStates = kNumLabels + 2;
constexpr double kTransitionMask = -1e4;

struct CrfParams {
  int input_size = 0;  // H
  bool bio_mask = false;  // optionally forbid O -> I-* style transitions
  Tensor w_emission;   // [H x 7]
  Tensor b_emission;   // [1 x 7]
  Tensor transitions;  // [9 x 9], row = previous state, column = next state

  static CrfParams init(int input_size, Rng& rng);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

// Per-token emission scores hidden * W + b, [N x 7].
Tensor emissions(const Tensor& hidden, const CrfParams& params);

// The transition matrix with the BIO-legality mask folded in when enabled.
Tensor effective_transitions(const CrfParams& params);

// log partition over all label sequences (forward algorithm in log space).
Tensor crf_logz(const Tensor& emit, const Tensor& transitions);

// score(gold) under the given emissions/transitions, including the
// START -> y_0 and y_{N-1} -> STOP transitions.
Tensor crf_path_score(const Tensor& emit, const Tensor& transitions,
                      const std::vector<int>& gold);

// negative log-likelihood logZ - score(gold); strictly positive for any
// finite parameters.
Tensor crf_nll(const Tensor& hidden, const std::vector<int>& gold, const CrfParams& params);

struct ViterbiResult {
  std::vector<int> labels;
  double score;
};

// Max-product decode; ties break toward the lowest label index at every
// backtrack step.
ViterbiResult viterbi_from(const Tensor& emit, const Tensor& transitions);
ViterbiResult viterbi(const Tensor& hidden, const CrfParams& params);

}  // namespace cofenet
