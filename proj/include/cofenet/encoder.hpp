#pragma once

#include <string>
#include <vector>

#include "cofenet/rng.hpp"
#include "cofenet/tensor.hpp"

namespace cofenet {

struct EncoderConfig {
  int vocab_size = 0;
  int embed_dim = 64;
  int hidden_per_dir = 50;  // total hidden size H = 2 * hidden_per_dir

  int hidden_size() const { return 2 * hidden_per_dir; }
};

// One direction of the gated recurrent layer. Gates read the concatenated
// [x_t, h_{t-1}] (update and reset) or [x_t, r_t (.) h_{t-1}] (candidate):
//   z_t = sigmoid([x_t, h_{t-1}] Wz + bz)
//   r_t = sigmoid([x_t, h_{t-1}] Wr + br)
//   n_t = tanh([x_t, r_t (.) h_{t-1}] Wn + bn)
//   h_t = (1 - z_t) (.) n_t + z_t (.) h_{t-1}
struct GruDirection {
  Tensor w_update;  // [(E+Hd) x Hd]
  Tensor w_reset;
  Tensor w_candidate;
  Tensor b_update;  // [1 x Hd]
  Tensor b_reset;
  Tensor b_candidate;
};

struct EncoderParams {
  EncoderConfig config;
  Tensor embedding;  // [V x E]
  GruDirection forward_dir;
  GruDirection backward_dir;

  static EncoderParams init(const EncoderConfig& config, Rng& rng);
  void collect(const std::string& prefix, std::vector<ParamRef>& out);
};

// Maps a token-index sequence to hidden states [N x H], H = 2*Hd, where
// row i concatenates the forward state at i with the backward state at i.
// Initial states are zero. Errors on an empty sequence or an index >= V.
Tensor encode(const std::vector<int>& tokens, const EncoderParams& params);

}  // namespace cofenet
