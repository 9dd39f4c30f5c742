#include "cofenet/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace cofenet {

Tensor::Tensor(int r, int c, std::vector<double> values)
    : shape{r, c}, data(std::make_shared<std::vector<double>>(std::move(values))) {
  if (data->size() != static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {
    throw std::invalid_argument("tensor: " + std::to_string(r) + "x" + std::to_string(c) +
                                " needs " + std::to_string(static_cast<std::size_t>(r) * c) +
                                " values, got " + std::to_string(data->size()));
  }
}

Tensor Tensor::row(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return Tensor(1, n, std::move(values));
}

double Tensor::item() const {
  if (numel() != 1) {
    throw std::invalid_argument("item: tensor is " + shape_str(*this) + ", not scalar");
  }
  return (*data)[0];
}

Tensor Tensor::detached() const {
  Tensor out(rows(), cols(), *data);
  return out;
}

std::string shape_str(const Tensor& t) {
  std::ostringstream os;
  os << "[" << t.rows() << "x" << t.cols() << "]";
  return os.str();
}

int Tape::watch(Tensor& t) {
  if (done_) {
    throw std::logic_error("tape: cannot watch after backward");
  }
  t.requires_grad = true;
  if (t.tape == this && t.node >= 0) {
    return t.node;  // already on this record
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{"leaf",
                        {},
                        t.rows(),
                        t.cols(),
                        t.data,
                        std::vector<double>(t.numel(), 0.0),
                        BackwardFn{}});
  t.tape = this;
  t.node = id;
  return id;
}

int Tape::push(const char* op, std::vector<int> inputs, int rows, int cols,
               std::shared_ptr<std::vector<double>> values, BackwardFn bwd) {
  if (done_) {
    throw std::logic_error("tape: cannot record op '" + std::string(op) + "' after backward");
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{op, std::move(inputs), rows, cols, std::move(values),
                        std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0),
                        std::move(bwd)});
  return id;
}

void Tape::backward(const Tensor& loss) {
  if (done_) {
    throw std::logic_error("tape: backward called twice on the same record");
  }
  if (loss.numel() != 1) {
    throw std::invalid_argument("tape: backward requires a scalar loss, got " + shape_str(loss));
  }
  if (loss.tape != this || loss.node < 0) {
    throw std::invalid_argument("tape: loss is not tracked on this record");
  }
  nodes_[loss.node].grad[0] = 1.0;
  for (int i = loss.node; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.backward) {
      n.backward(*this, n.grad);
    }
  }
  // Release closures and cached intermediates; gradients stay readable.
  for (Node& n : nodes_) {
    n.backward = BackwardFn{};
  }
  done_ = true;
}

const std::vector<double>& Tape::grad(const Tensor& t) const {
  if (t.tape != this || t.node < 0) {
    throw std::invalid_argument("tape: tensor is not tracked on this record");
  }
  return nodes_[t.node].grad;
}

}  // namespace cofenet
