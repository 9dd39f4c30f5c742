#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cofenet {

class Tape;

// Dense 2-D tensor of doubles. Scalars are [1x1], vectors are [1xN] rows.
// A tensor becomes "tracked" when it is registered on a Tape (parameters,
// via Tape::watch) or produced by an op whose inputs are tracked; tracked
// tensors carry the id of their node on the active record.
struct Tensor {
  std::vector<int> shape;  // {rows, cols}
  std::shared_ptr<std::vector<double>> data;
  bool requires_grad = false;
  Tape* tape = nullptr;
  int node = -1;

  Tensor() : shape{0, 0}, data(std::make_shared<std::vector<double>>()) {}

  Tensor(int r, int c)
      : shape{r, c},
        data(std::make_shared<std::vector<double>>(
            static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0)) {}

  Tensor(int r, int c, std::vector<double> values);

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor scalar(double v) { return Tensor(1, 1, {v}); }
  static Tensor row(std::vector<double> values);

  int rows() const { return shape[0]; }
  int cols() const { return shape[1]; }
  std::size_t numel() const { return data->size(); }
  bool tracked() const { return node >= 0; }

  double& at(int r, int c) { return (*data)[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return (*data)[static_cast<std::size_t>(r) * cols() + c]; }
  double* ptr() { return data->data(); }
  const double* ptr() const { return data->data(); }
  std::vector<double>& vals() { return *data; }
  const std::vector<double>& vals() const { return *data; }

  double item() const;  // value of a [1x1] tensor

  // Deep copy of the buffer, detached from any record.
  Tensor detached() const;
};

std::string shape_str(const Tensor& t);

// Reverse-mode computation record. Ops append nodes in execution order, so
// the node list is topologically sorted by construction; backward() walks it
// once in reverse. A record is single-use: after backward() no further ops
// may be recorded and a second backward() is an error.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Registers a parameter as a leaf node. Sets requires_grad.
  int watch(Tensor& t);

  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every node.
  // Errors: loss not scalar, loss not tracked on this record, called twice.
  void backward(const Tensor& loss);

  // Gradient of a tracked tensor after backward().
  const std::vector<double>& grad(const Tensor& t) const;

  bool backward_done() const { return done_; }
  std::size_t size() const { return nodes_.size(); }

  // --- op-implementation interface ---
  using BackwardFn = std::function<void(Tape&, const std::vector<double>&)>;

  int push(const char* op, std::vector<int> inputs, int rows, int cols,
           std::shared_ptr<std::vector<double>> values, BackwardFn bwd);

  std::vector<double>& grad_buf(int node) { return nodes_[node].grad; }
  const std::vector<double>& node_values(int node) const { return *nodes_[node].values; }

 private:
  struct Node {
    const char* op;
    std::vector<int> inputs;
    int rows;
    int cols;
    std::shared_ptr<std::vector<double>> values;  // cached forward values
    std::vector<double> grad;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
  bool done_ = false;
};

// Named reference to a parameter tensor; the unit of the parameter manifest,
// checkpointing, optimization and gradient checking.
struct ParamRef {
  std::string name;
  Tensor* tensor;
};

}  // namespace cofenet
