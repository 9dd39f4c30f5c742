#pragma once

#include <functional>
#include <vector>

#include "cofenet/grad_check.hpp"
#include "cofenet/ops.hpp"
#include "cofenet/rng.hpp"
#include "cofenet/tensor.hpp"

namespace testutil {

inline cofenet::Tensor random_tensor(int r, int c, cofenet::Rng& rng, double lo = -2.0,
                                     double hi = 2.0) {
  cofenet::Tensor t(r, c);
  for (double& v : t.vals()) v = rng.uniform(lo, hi);
  return t;
}

// Independent triple-loop matrix product oracle.
inline cofenet::Tensor naive_matmul(const cofenet::Tensor& a, const cofenet::Tensor& b) {
  cofenet::Tensor out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols(); ++k) acc += a.at(i, k) * b.at(k, j);
      out.at(i, j) = acc;
    }
  }
  return out;
}

// Runs grad_check on loss = sum(weights ⊙ f()) for random fixed weights so
// the op sees a non-uniform output gradient. Returns the worst relative
// error across all listed inputs.
inline double fd_worst_err(const std::function<cofenet::Tensor()>& f,
                           const std::vector<cofenet::ParamRef>& inputs, cofenet::Rng& rng) {
  cofenet::Tensor probe = f();  // shape probe, untracked
  cofenet::Tensor w = random_tensor(probe.rows(), probe.cols(), rng, -1.0, 1.0);
  auto loss_fn = [&]() { return cofenet::sum_all(cofenet::mul(f(), w)); };
  return cofenet::grad_check(loss_fn, inputs).worst_rel_err;
}

}  // namespace testutil
