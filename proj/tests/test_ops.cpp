#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cofenet/ops.hpp"
#include "cofenet/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cofenet;
using testutil::fd_worst_err;
using testutil::naive_matmul;
using testutil::random_tensor;

TEST_CASE("matmul: identity and zero cases") {
  Tensor eye(2, 2, {1, 0, 0, 1});
  Tensor m(2, 2, {1, 2, 3, 4});
  Tensor out = matmul(eye, m);
  for (int i = 0; i < 4; ++i) CHECK(out.vals()[i] == m.vals()[i]);

  Tensor a(1, 2, {1, 2});
  Tensor z(2, 1, {0, 0});
  CHECK(matmul(a, z).item() == 0.0);
}

TEST_CASE("matmul: forward matches triple-loop oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor a = random_tensor(3, 4, rng);
    Tensor b = random_tensor(4, 2, rng);
    Tensor got = matmul(a, b);
    Tensor want = naive_matmul(a, b);
    for (std::size_t i = 0; i < got.numel(); ++i) {
      CHECK(got.vals()[i] == doctest::Approx(want.vals()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("matmul: shape mismatch names both shapes") {
  Tensor a(2, 3), b(2, 3);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("[2x3]"), std::invalid_argument);
}

TEST_CASE("concat: single input is identity, axis-0 stacks") {
  Tensor x(2, 1, {1, 2});
  Tensor only = concat({&x}, 0);
  CHECK(only.rows() == 2);
  CHECK(only.vals() == x.vals());

  Tensor y(2, 1, {3, 4});
  Tensor stacked = concat({&x, &y}, 0);
  CHECK(stacked.rows() == 4);
  CHECK(stacked.vals() == std::vector<double>{1, 2, 3, 4});

  CHECK_THROWS_AS(concat(std::vector<const Tensor*>{}, 0), std::invalid_argument);
  Tensor wide(2, 2);
  CHECK_THROWS_AS(concat({&x, &wide}, 0), std::invalid_argument);
}

TEST_CASE("gelu: values against the erf oracle") {
  auto oracle = [](double v) { return v * 0.5 * (1.0 + std::erf(v / std::sqrt(2.0))); };

  Tensor x(1, 3, {0.0, 1.0, -10.0});
  Tensor y = gelu(x);
  CHECK(y.at(0, 0) == 0.0);
  CHECK(y.at(0, 1) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(y.at(0, 1) == doctest::Approx(oracle(1.0)).epsilon(1e-14));
  // effectively zero at -10
  CHECK(y.at(0, 2) == doctest::Approx(-7.619853024160525e-23).epsilon(1e-6));
  CHECK(std::abs(y.at(0, 2)) < 1e-20);

  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(-6.0, 6.0);
    Tensor g = gelu(Tensor::scalar(v));
    CHECK(g.item() == doctest::Approx(oracle(v)).epsilon(1e-14));
    // bracketing: gelu stays between min(x,0) and max(x,0)
    CHECK(g.item() >= std::min(v, 0.0) - 1e-15);
    CHECK(g.item() <= std::max(v, 0.0) + 1e-15);
  }
  // gelu(x)/x -> 1 for large x
  CHECK(gelu(Tensor::scalar(30.0)).item() / 30.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sigmoid: values and saturation") {
  CHECK(sigmoid(Tensor::scalar(0.0)).item() == 0.5);
  CHECK(sigmoid(Tensor::scalar(50.0)).item() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigmoid(Tensor::scalar(1.0)).item() ==
        doctest::Approx(0.7310585786300049).epsilon(1e-12));
  CHECK(sigmoid(Tensor::scalar(1.0)).item() ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));

  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    // strictly inside (0,1) wherever doubles can represent that
    const double v = rng.uniform(-30.0, 30.0);
    const double s = sigmoid(Tensor::scalar(v)).item();
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  for (int i = 0; i < 100; ++i) {
    // stable (finite, in [0,1]) out to |x| = 1e3 where the output saturates
    const double v = rng.uniform(-1000.0, 1000.0);
    const double s = sigmoid(Tensor::scalar(v)).item();
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("softmax: uniform, exp oracle, shift invariance") {
  Tensor flat = softmax(Tensor(1, 4), 1);
  for (int j = 0; j < 4; ++j) CHECK(flat.at(0, j) == doctest::Approx(0.25).epsilon(1e-15));

  Tensor x(1, 3, {1, 2, 3});
  Tensor y = softmax(x, 1);
  // exp oracle: e^1, e^2, e^3 normalized
  const double denom = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(y.at(0, 0) == doctest::Approx(std::exp(1.0) / denom).epsilon(1e-14));
  CHECK(y.at(0, 0) == doctest::Approx(0.09003057317038046).epsilon(1e-12));
  CHECK(y.at(0, 1) == doctest::Approx(0.24472847105479767).epsilon(1e-12));
  CHECK(y.at(0, 2) == doctest::Approx(0.6652409557748219).epsilon(1e-12));

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor a = random_tensor(2, 5, rng, -30.0, 30.0);
    const double c = rng.uniform(-100.0, 100.0);
    Tensor shifted = a.detached();
    for (double& v : shifted.vals()) v += c;
    Tensor ya = softmax(a, 1);
    Tensor yc = softmax(shifted, 1);
    for (std::size_t i = 0; i < ya.numel(); ++i) {
      CHECK(ya.vals()[i] == doctest::Approx(yc.vals()[i]).epsilon(1e-12));
    }
    for (int r = 0; r < 2; ++r) {
      double sum = 0.0;
      for (int j = 0; j < 5; ++j) sum += ya.at(r, j);
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("cross_entropy: one-hot, uniform, hand-summed oracle") {
  // one-hot-correct rows (within the normalization check's tolerance)
  Tensor hot(2, 3, {1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
  CHECK(cross_entropy(hot, {0, 1}).item() == 0.0);

  const int n = 5, l = 7;
  Tensor uni(n, l);
  for (double& v : uni.vals()) v = 1.0 / l;
  CHECK(cross_entropy(uni, {0, 1, 2, 3, 4}).item() ==
        doctest::Approx(n * std::log(7.0)).epsilon(1e-12));

  Tensor p(2, 3, {0.2, 0.3, 0.5, 0.1, 0.6, 0.3});
  const double want = -(std::log(0.3) + std::log(0.1));  // truth = {1, 0}
  CHECK(cross_entropy(p, {1, 0}).item() == doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(cross_entropy(p, {1, 3}), std::out_of_range);
  Tensor bad(1, 3, {0.5, 0.2, 0.2});
  CHECK_THROWS_AS(cross_entropy(bad, {0}), std::invalid_argument);
}

TEST_CASE("backward: basic analytic gradients") {
  Rng rng(13);
  {
    Tape tape;
    Tensor w = random_tensor(3, 2, rng);
    tape.watch(w);
    Tensor loss = sum_all(w);
    tape.backward(loss);
    for (double g : tape.grad(w)) CHECK(g == 1.0);
  }
  {
    Tape tape;
    Tensor w(1, 2, {1, 2});
    tape.watch(w);
    Tensor loss = sum_all(mul(w, w));
    tape.backward(loss);
    CHECK(tape.grad(w)[0] == 2.0);
    CHECK(tape.grad(w)[1] == 4.0);
  }
}

TEST_CASE("backward: scalar-only and single-use record errors") {
  Tape tape;
  Tensor w(2, 2, {1, 2, 3, 4});
  tape.watch(w);
  Tensor two = add(w, w);
  CHECK_THROWS_AS(tape.backward(two), std::invalid_argument);
  Tensor loss = sum_all(two);
  tape.backward(loss);
  CHECK_THROWS_AS(tape.backward(loss), std::logic_error);
  CHECK_THROWS_AS(add(two, two), std::logic_error);  // record is spent
}

TEST_CASE("backward: linearity of gradients") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor w = random_tensor(2, 3, rng);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    auto run = [&](double ca, double cb) {
      Tape tape;
      Tensor ww = w.detached();
      tape.watch(ww);
      Tensor l1 = sum_all(mul(ww, ww));
      Tensor l2 = sum_all(gelu(ww));
      Tensor loss = add(scale(l1, ca), scale(l2, cb));
      tape.backward(loss);
      return tape.grad(ww);
    };
    auto gab = run(a, b);
    auto g10 = run(1, 0);
    auto g01 = run(0, 1);
    for (std::size_t i = 0; i < gab.size(); ++i) {
      CHECK(gab[i] == doctest::Approx(a * g10[i] + b * g01[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("forward determinism: same inputs give bit-identical values") {
  auto build = [] {
    Rng rng(99);
    Tensor a = random_tensor(4, 3, rng);
    Tensor b = random_tensor(3, 5, rng);
    return softmax(add(matmul(a, b), random_tensor(4, 5, rng)), 1);
  };
  Tensor x = build();
  Tensor y = build();
  CHECK(x.vals() == y.vals());
}

TEST_CASE("every differentiable op matches finite differences at random points") {
  Rng rng(101);
  const double tol = 1e-4;

  auto points = [&](auto make_check, int trials) {
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) worst = std::max(worst, make_check());
    CHECK(worst < tol);
  };

  // each trial covers all elements of its inputs; >= 100 points per op overall
  points(
      [&] {
        Tensor a = random_tensor(3, 4, rng), b = random_tensor(4, 2, rng);
        return fd_worst_err([&] { return matmul(a, b); },
                            {{"a", &a}, {"b", &b}}, rng);
      },
      10);
  points(
      [&] {
        Tensor a = random_tensor(2, 3, rng), b = random_tensor(2, 3, rng);
        return std::max(
            {fd_worst_err([&] { return add(a, b); }, {{"a", &a}, {"b", &b}}, rng),
             fd_worst_err([&] { return sub(a, b); }, {{"a", &a}, {"b", &b}}, rng),
             fd_worst_err([&] { return mul(a, b); }, {{"a", &a}, {"b", &b}}, rng),
             fd_worst_err([&] { return scale(a, 1.7); }, {{"a", &a}}, rng)});
      },
      10);
  points(
      [&] {
        Tensor a = random_tensor(2, 2, rng), b = random_tensor(3, 2, rng);
        Tensor c = random_tensor(2, 4, rng);
        return std::max(
            {fd_worst_err([&] { return concat({&a, &b}, 0); }, {{"a", &a}, {"b", &b}}, rng),
             fd_worst_err([&] { return concat({&a, &c}, 1); }, {{"a", &a}, {"c", &c}}, rng)});
      },
      10);
  points(
      [&] {
        Tensor x = random_tensor(4, 5, rng);
        return std::max({fd_worst_err([&] { return select_row(x, 2); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return block(x, 1, 3, 1, 4); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return transpose(x); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return reshape_row(x); }, {{"x", &x}}, rng)});
      },
      8);
  points(
      [&] {
        Tensor table = random_tensor(6, 3, rng);
        std::vector<int> idx = {1, 4, 1, 0};  // repeated row exercises accumulation
        return fd_worst_err([&] { return gather_rows(table, idx); }, {{"t", &table}}, rng);
      },
      10);
  points(
      [&] {
        Tensor x = random_tensor(3, 4, rng, -3.0, 3.0);
        return std::max({fd_worst_err([&] { return gelu(x); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return sigmoid(x); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return cofenet::tanh(x); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return softmax(x, 1); }, {{"x", &x}}, rng),
                         fd_worst_err([&] { return softmax(x, 0); }, {{"x", &x}}, rng)});
      },
      8);
  points(
      [&] {
        Tensor logits = random_tensor(3, 5, rng);
        std::vector<int> truth = {rng.uniform_int(0, 4), rng.uniform_int(0, 4),
                                  rng.uniform_int(0, 4)};
        // softmax keeps rows normalized while logits move under FD
        auto f = [&] { return cross_entropy(softmax(logits, 1), truth); };
        return grad_check(f, {{"logits", &logits}}).worst_rel_err;
      },
      10);
  points(
      [&] {
        Tensor w = random_tensor(1, 4, rng, -1.0, 1.0);
        Tensor p0 = random_tensor(1, 6, rng), p1 = random_tensor(1, 6, rng);
        Tensor p2 = random_tensor(1, 6, rng), p3 = random_tensor(1, 6, rng);
        return fd_worst_err([&] { return weighted_sum(w, {&p0, &p1, &p2, &p3}); },
                            {{"w", &w}, {"p0", &p0}, {"p1", &p1}, {"p2", &p2}, {"p3", &p3}},
                            rng);
      },
      8);
  points(
      [&] {
        Tensor col = random_tensor(1, 3, rng);
        Tensor m = random_tensor(3, 4, rng);
        std::vector<std::pair<int, int>> at = {{0, 1}, {2, 3}, {0, 1}};
        return std::max(
            {fd_worst_err([&] { return add_outer(col, m); }, {{"c", &col}, {"m", &m}}, rng),
             fd_worst_err([&] { return logsumexp_cols(m); }, {{"m", &m}}, rng),
             fd_worst_err([&] { return logsumexp_row(col); }, {{"c", &col}}, rng),
             grad_check([&] { return gather_sum(m, at); }, {{"m", &m}}).worst_rel_err,
             grad_check([&] { return sum_all(m); }, {{"m", &m}}).worst_rel_err});
      },
      8);
}

TEST_CASE("argmax_row breaks ties toward the lowest index") {
  Tensor x(2, 4, {1, 3, 3, 2, 5, 5, 5, 5});
  CHECK(argmax_row(x, 0) == 1);
  CHECK(argmax_row(x, 1) == 0);
}
