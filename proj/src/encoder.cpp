#include "cofenet/encoder.hpp"

#include <cmath>
#include <stdexcept>

#include "cofenet/ops.hpp"

namespace cofenet {

namespace {

Tensor xavier(int rows, int cols, Rng& rng) {
  Tensor t(rows, cols);
  const double limit = std::sqrt(6.0 / (rows + cols));
  for (double& v : t.vals()) v = rng.uniform(-limit, limit);
  return t;
}

GruDirection init_direction(int in_dim, int hidden, Rng& rng) {
  GruDirection d;
  d.w_update = xavier(in_dim + hidden, hidden, rng);
  d.w_reset = xavier(in_dim + hidden, hidden, rng);
  d.w_candidate = xavier(in_dim + hidden, hidden, rng);
  d.b_update = Tensor(1, hidden);
  d.b_reset = Tensor(1, hidden);
  d.b_candidate = Tensor(1, hidden);
  return d;
}

void collect_direction(GruDirection& d, const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".w_update", &d.w_update});
  out.push_back({prefix + ".w_reset", &d.w_reset});
  out.push_back({prefix + ".w_candidate", &d.w_candidate});
  out.push_back({prefix + ".b_update", &d.b_update});
  out.push_back({prefix + ".b_reset", &d.b_reset});
  out.push_back({prefix + ".b_candidate", &d.b_candidate});
}

// Hidden states for one direction, indexed by original position.
std::vector<Tensor> run_direction(const Tensor& emb, const GruDirection& d, int hidden,
                                  bool reversed) {
  const int n = emb.rows();
  std::vector<Tensor> states(n);
  Tensor h(1, hidden);  // zero initial state, untracked constant
  for (int step = 0; step < n; ++step) {
    const int i = reversed ? n - 1 - step : step;
    Tensor x = select_row(emb, i);
    Tensor xh = concat({&x, &h}, 1);
    Tensor z = sigmoid(add(matmul(xh, d.w_update), d.b_update));
    Tensor r = sigmoid(add(matmul(xh, d.w_reset), d.b_reset));
    Tensor rh = mul(r, h);
    Tensor xrh = concat({&x, &rh}, 1);
    Tensor cand = tanh(add(matmul(xrh, d.w_candidate), d.b_candidate));
    Tensor keep(1, hidden);
    for (double& v : keep.vals()) v = 1.0;
    h = add(mul(sub(keep, z), cand), mul(z, h));
    states[i] = h;
  }
  return states;
}

}  // namespace

EncoderParams EncoderParams::init(const EncoderConfig& config, Rng& rng) {
  EncoderParams p;
  p.config = config;
  p.embedding = Tensor(config.vocab_size, config.embed_dim);
  for (double& v : p.embedding.vals()) v = rng.uniform(-0.1, 0.1);
  p.forward_dir = init_direction(config.embed_dim, config.hidden_per_dir, rng);
  p.backward_dir = init_direction(config.embed_dim, config.hidden_per_dir, rng);
  return p;
}

void EncoderParams::collect(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".embedding", &embedding});
  collect_direction(forward_dir, prefix + ".fwd", out);
  collect_direction(backward_dir, prefix + ".bwd", out);
}

Tensor encode(const std::vector<int>& tokens, const EncoderParams& params) {
  if (tokens.empty()) {
    throw std::invalid_argument("encode: empty token sequence");
  }
  for (int id : tokens) {
    if (id < 0 || id >= params.config.vocab_size) {
      throw std::out_of_range("encode: token index " + std::to_string(id) +
                              " out of range (vocab size " +
                              std::to_string(params.config.vocab_size) + ")");
    }
  }
  const int hd = params.config.hidden_per_dir;
  Tensor emb = gather_rows(params.embedding, tokens);
  std::vector<Tensor> fwd = run_direction(emb, params.forward_dir, hd, false);
  std::vector<Tensor> bwd = run_direction(emb, params.backward_dir, hd, true);
  std::vector<Tensor> rows;
  rows.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    rows.push_back(concat({&fwd[i], &bwd[i]}, 1));
  }
  return concat(rows, 0);
}

}  // namespace cofenet
