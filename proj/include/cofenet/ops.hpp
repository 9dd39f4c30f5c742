#pragma once

#include <utility>
#include <vector>

#include "cofenet/tensor.hpp"

namespace cofenet {

// Differentiable tensor operations. Every op computes eagerly; when any
// input is tracked on a record, the result is tracked too and a backward
// closure is appended to that record. Mixing inputs from two different
// records is an error.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor scale(const Tensor& a, double c);

// axis 0 stacks rows, axis 1 extends columns.
Tensor concat(const std::vector<const Tensor*>& parts, int axis);
Tensor concat(const std::vector<Tensor>& parts, int axis);
Tensor concat(std::initializer_list<const Tensor*> parts, int axis);

Tensor select_row(const Tensor& x, int row);
Tensor block(const Tensor& x, int r0, int r1, int c0, int c1);  // half-open
Tensor transpose(const Tensor& x);
Tensor reshape_row(const Tensor& x);  // [RxC] -> [1xR*C]

// Embedding-style row gather; gradient scatters (and sums) into the table.
Tensor gather_rows(const Tensor& table, const std::vector<int>& indices);

Tensor gelu(const Tensor& x);     // exact erf form x * Phi(x)
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor softmax(const Tensor& x, int axis);

// -sum_i log(max(probs[i][truth[i]], kLogFloor)); rows must already be
// normalized (checked to 1e-6).
Tensor cross_entropy(const Tensor& probs, const std::vector<int>& truth);
constexpr double kLogFloor = 1e-12;

Tensor sum_all(const Tensor& x);

// sum_k weights[k] * parts[k], weights [1xK], each part [1xD]
Tensor weighted_sum(const Tensor& weights, const std::vector<const Tensor*>& parts);

// out[p][q] = col[p] + m[p][q], col given as [1xP]
Tensor add_outer(const Tensor& col, const Tensor& m);

Tensor logsumexp_cols(const Tensor& m);  // [PxQ] -> [1xQ], lse down each column
Tensor logsumexp_row(const Tensor& x);   // [1xQ] -> [1x1]

// sum of x[i][j] over the given index pairs
Tensor gather_sum(const Tensor& x, const std::vector<std::pair<int, int>>& at);

// Lowest-index argmax over one row of a [RxC] tensor (deterministic tie-break).
int argmax_row(const Tensor& x, int row);

}  // namespace cofenet
