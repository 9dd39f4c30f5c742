#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cofenet/tensor.hpp"

namespace cofenet {

// Compares analytic gradients against central finite differences for a
// deterministic scalar-valued closure over the given parameters.
//
// The closure is called twice per perturbed element for the numeric side
// (parameters untracked, so nothing records) and once on a fresh record for
// the analytic side. Relative error uses |a - fd| / max(|a|, |fd|, 1e-3);
// the floor keeps finite-difference roundoff noise on near-zero gradients
// from registering as disagreement.
struct GradCheckReport {
  struct Entry {
    std::string name;
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
  };
  std::vector<Entry> per_param;
  double worst_rel_err = 0.0;

  bool passes(double tolerance) const { return worst_rel_err < tolerance; }
};

// loss_fn builds the forward pass from the current parameter values and
// returns the scalar loss. It must be deterministic. grad_check itself
// registers the parameters on a record for the analytic pass and detaches
// them again for the finite-difference evaluations.
GradCheckReport grad_check(const std::function<Tensor()>& loss_fn,
                           const std::vector<ParamRef>& params, double step = 1e-5);

}  // namespace cofenet
