#include <cmath>
#include <vector>

#include "cofenet/adam.hpp"
#include "cofenet/grad_check.hpp"
#include "cofenet/ops.hpp"
#include "cofenet/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cofenet;

TEST_CASE("adam: zero gradient leaves fresh parameters unchanged") {
  Tensor w(1, 3, {0.5, -0.5, 2.0});
  std::vector<double> g(3, 0.0);
  AdamState state;
  adam_step({{"w", &w}}, {&g}, state);
  CHECK(w.vals() == std::vector<double>{0.5, -0.5, 2.0});
}

TEST_CASE("adam: first step moves by about the learning rate") {
  // hand-evaluated recurrences: m=0.1, v=1e-3, mhat=1, vhat=1
  // => step = lr * 1/(1 + eps)
  Tensor w(1, 1, {0.0});
  std::vector<double> g = {1.0};
  AdamState state;
  state.learning_rate = 0.1;
  adam_step({{"w", &w}}, {&g}, state);
  CHECK(w.item() == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-15));
  CHECK(w.item() == doctest::Approx(-0.1).epsilon(1e-7));
}

TEST_CASE("adam: two steps match an independent scalar re-implementation") {
  // scalar oracle of the published update rule
  double m = 0.0, v = 0.0, w_ref = 0.3;
  const double lr = 0.05, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const std::vector<double> grads = {0.7, -1.3};
  for (int t = 1; t <= 2; ++t) {
    const double g = grads[t - 1];
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mhat = m / (1 - std::pow(b1, t));
    const double vhat = v / (1 - std::pow(b2, t));
    w_ref -= lr * mhat / (std::sqrt(vhat) + eps);
  }

  Tensor w(1, 1, {0.3});
  AdamState state;
  state.learning_rate = lr;
  std::vector<double> g1 = {0.7}, g2 = {-1.3};
  adam_step({{"w", &w}}, {&g1}, state);
  adam_step({{"w", &w}}, {&g2}, state);
  CHECK(w.item() == doctest::Approx(w_ref).epsilon(1e-12));
}

TEST_CASE("grad_check: linear regression toy is exactly differentiable") {
  Rng rng(23);
  Tensor x = testutil::random_tensor(8, 3, rng);
  Tensor target = testutil::random_tensor(8, 1, rng);
  Tensor w = testutil::random_tensor(3, 1, rng);
  Tensor b = testutil::random_tensor(1, 1, rng);

  Tensor ones(8, 1);
  for (double& v : ones.vals()) v = 1.0;
  auto loss_fn = [&] {
    Tensor err = sub(add(matmul(x, w), matmul(ones, b)), target);
    return sum_all(mul(err, err));
  };
  auto report = grad_check(loss_fn, {{"w", &w}, {"b", &b}});
  CHECK(report.worst_rel_err < 1e-6);
}
