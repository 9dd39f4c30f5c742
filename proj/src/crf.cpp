#include "cofenet/crf.hpp"

#include <cmath>
#include <stdexcept>

#include "cofenet/ops.hpp"

namespace cofenet {

namespace {

bool legal_bio_transition(int src, int dst) {
  if (!is_inside(dst)) return true;
  return src == dst || src == dst - 1;  // I-x continues from I-x or B-x
}

}  // namespace

CrfParams CrfParams::init(int input_size, Rng& rng) {
  CrfParams p;
  p.input_size = input_size;
  const double limit = std::sqrt(6.0 / (input_size + kNumLabels));
  p.w_emission = Tensor(input_size, kNumLabels);
  for (double& v : p.w_emission.vals()) v = rng.uniform(-limit, limit);
  p.b_emission = Tensor(1, kNumLabels);
  p.transitions = Tensor(kCrfStates, kCrfStates);
  for (double& v : p.transitions.vals()) v = rng.uniform(-0.1, 0.1);
  for (int s = 0; s < kCrfStates; ++s) {
    p.transitions.at(s, kCrfStart) = kTransitionMask;  // nothing enters START
    p.transitions.at(kCrfStop, s) = kTransitionMask;   // nothing leaves STOP
  }
  return p;
}

void CrfParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".w_emission", &w_emission});
  out.push_back({prefix + ".b_emission", &b_emission});
  out.push_back({prefix + ".transitions", &transitions});
}

Tensor emissions(const Tensor& hidden, const CrfParams& params) {
  if (hidden.cols() != params.input_size) {
    throw std::invalid_argument("crf emissions: hidden " + shape_str(hidden) +
                                " does not match input size " +
                                std::to_string(params.input_size));
  }
  Tensor ones(hidden.rows(), 1);
  for (double& v : ones.vals()) v = 1.0;
  return add(matmul(hidden, params.w_emission), matmul(ones, params.b_emission));
}

Tensor effective_transitions(const CrfParams& params) {
  if (!params.bio_mask) return params.transitions;
  Tensor mask(kCrfStates, kCrfStates);
  for (int s = 0; s < kCrfStates; ++s) {
    for (int d = 0; d < kNumLabels; ++d) {
      if (!legal_bio_transition(s, d)) mask.at(s, d) = kTransitionMask;
    }
  }
  return add(params.transitions, mask);
}

Tensor crf_logz(const Tensor& emit, const Tensor& transitions) {
  const int n = emit.rows();
  Tensor core = block(transitions, 0, kNumLabels, 0, kNumLabels);
  Tensor from_start = block(transitions, kCrfStart, kCrfStart + 1, 0, kNumLabels);
  Tensor to_stop = transpose(block(transitions, 0, kNumLabels, kCrfStop, kCrfStop + 1));

  Tensor alpha = add(from_start, select_row(emit, 0));
  for (int t = 1; t < n; ++t) {
    Tensor scores = add_outer(alpha, core);
    alpha = add(logsumexp_cols(scores), select_row(emit, t));
  }
  return logsumexp_row(add(alpha, to_stop));
}

Tensor crf_path_score(const Tensor& emit, const Tensor& transitions,
                      const std::vector<int>& gold) {
  const int n = emit.rows();
  if (static_cast<int>(gold.size()) != n) {
    throw std::invalid_argument("crf path score: " + std::to_string(gold.size()) +
                                " labels for " + std::to_string(n) + " positions");
  }
  std::vector<std::pair<int, int>> emit_at, trans_at;
  trans_at.push_back({kCrfStart, gold[0]});
  for (int t = 0; t < n; ++t) {
    emit_at.push_back({t, gold[t]});
    if (t > 0) trans_at.push_back({gold[t - 1], gold[t]});
  }
  trans_at.push_back({gold[n - 1], kCrfStop});
  return add(gather_sum(emit, emit_at), gather_sum(transitions, trans_at));
}

Tensor crf_nll(const Tensor& hidden, const std::vector<int>& gold, const CrfParams& params) {
  if (hidden.rows() < 1) {
    throw std::invalid_argument("crf_nll: empty sequence");
  }
  Tensor emit = emissions(hidden, params);
  Tensor trans = effective_transitions(params);
  return sub(crf_logz(emit, trans), crf_path_score(emit, trans, gold));
}

ViterbiResult viterbi_from(const Tensor& emit, const Tensor& transitions) {
  const int n = emit.rows();
  if (n < 1) {
    throw std::invalid_argument("viterbi: empty sequence");
  }
  std::vector<std::vector<double>> delta(n, std::vector<double>(kNumLabels));
  std::vector<std::vector<int>> back(n, std::vector<int>(kNumLabels, -1));
  for (int j = 0; j < kNumLabels; ++j) {
    delta[0][j] = transitions.at(kCrfStart, j) + emit.at(0, j);
  }
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < kNumLabels; ++j) {
      int arg = 0;
      double best = delta[t - 1][0] + transitions.at(0, j);
      for (int k = 1; k < kNumLabels; ++k) {
        const double cand = delta[t - 1][k] + transitions.at(k, j);
        if (cand > best) {  // strict: ties keep the lowest k
          best = cand;
          arg = k;
        }
      }
      delta[t][j] = best + emit.at(t, j);
      back[t][j] = arg;
    }
  }
  int last = 0;
  double best = delta[n - 1][0] + transitions.at(0, kCrfStop);
  for (int j = 1; j < kNumLabels; ++j) {
    const double cand = delta[n - 1][j] + transitions.at(j, kCrfStop);
    if (cand > best) {
      best = cand;
      last = j;
    }
  }
  ViterbiResult result;
  result.score = best;
  result.labels.assign(n, 0);
  result.labels[n - 1] = last;
  for (int t = n - 1; t > 0; --t) {
    result.labels[t - 1] = back[t][result.labels[t]];
  }
  return result;
}

ViterbiResult viterbi(const Tensor& hidden, const CrfParams& params) {
  Tensor emit = emissions(hidden, params);
  return viterbi_from(emit, effective_transitions(params));
}

}  // namespace cofenet
