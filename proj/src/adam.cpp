#include "cofenet/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace cofenet {

void adam_step(const std::vector<ParamRef>& params,
               const std::vector<const std::vector<double>*>& grads, AdamState& state) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("adam_step: " + std::to_string(params.size()) + " params vs " +
                                std::to_string(grads.size()) + " grads");
  }
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& w = *params[p].tensor;
    const std::vector<double>& g = *grads[p];
    if (g.size() != w.numel()) {
      throw std::invalid_argument("adam_step: gradient size " + std::to_string(g.size()) +
                                  " != parameter " + params[p].name + " size " +
                                  std::to_string(w.numel()));
    }
    AdamState::Moments& mo = state.moments[params[p].name];
    if (mo.m.empty()) {
      mo.m.assign(w.numel(), 0.0);
      mo.v.assign(w.numel(), 0.0);
    }
    double* wv = w.ptr();
    for (std::size_t i = 0; i < g.size(); ++i) {
      mo.m[i] = state.beta1 * mo.m[i] + (1.0 - state.beta1) * g[i];
      mo.v[i] = state.beta2 * mo.v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mhat = mo.m[i] / bc1;
      const double vhat = mo.v[i] / bc2;
      wv[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
    }
  }
}

}  // namespace cofenet
