#pragma once

#include <map>
#include <string>
#include <vector>

#include "cofenet/tensor.hpp"

namespace cofenet {

// Standard Adam with bias correction. Moment buffers are kept per parameter
// name; shapes must match the parameter throughout.
struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step_count = 0;

  struct Moments {
    std::vector<double> m;
    std::vector<double> v;
  };
  std::map<std::string, Moments> moments;
};

// One update over all params; grads[i] aligns with params[i].
void adam_step(const std::vector<ParamRef>& params,
               const std::vector<const std::vector<double>*>& grads, AdamState& state);

}  // namespace cofenet
