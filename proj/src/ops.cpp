#include "cofenet/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cofenet {

namespace {

using Buf = std::shared_ptr<std::vector<double>>;

Tape* record_of(std::initializer_list<const Tensor*> inputs) {
  Tape* t = nullptr;
  for (const Tensor* x : inputs) {
    if (!x->tracked()) continue;
    if (t != nullptr && x->tape != t) {
      throw std::logic_error("ops: inputs are tracked on different records");
    }
    t = x->tape;
  }
  return t;
}

void finish(Tensor& out, Tape* t, const char* op, std::vector<int> inputs,
            Tape::BackwardFn bwd) {
  if (t == nullptr) return;
  out.requires_grad = true;
  out.tape = t;
  out.node = t->push(op, std::move(inputs), out.rows(), out.cols(), out.data, std::move(bwd));
}

void shape_guard(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  shape_guard(a.cols() == b.rows(),
              "matmul: inner dimensions disagree: " + shape_str(a) + " x " + shape_str(b));
  const int p = a.rows(), q = a.cols(), r = b.cols();
  Tensor out(p, r);
  const double* A = a.ptr();
  const double* B = b.ptr();
  double* C = out.ptr();
  for (int i = 0; i < p; ++i) {
    double* Ci = C + static_cast<std::size_t>(i) * r;
    const double* Ai = A + static_cast<std::size_t>(i) * q;
    for (int k = 0; k < q; ++k) {
      const double aik = Ai[k];
      if (aik == 0.0) continue;
      const double* Bk = B + static_cast<std::size_t>(k) * r;
      for (int j = 0; j < r; ++j) Ci[j] += aik * Bk[j];
    }
  }
  Tape* t = record_of({&a, &b});
  if (t) {
    const int ia = (a.tape == t) ? a.node : -1;
    const int ib = (b.tape == t) ? b.node : -1;
    Buf av = a.data, bv = b.data;
    finish(out, t, "matmul", {ia, ib},
           [ia, ib, av, bv, p, q, r](Tape& tp, const std::vector<double>& g) {
             if (ia >= 0) {
               std::vector<double>& da = tp.grad_buf(ia);
               const double* B = bv->data();
               for (int i = 0; i < p; ++i) {
                 const double* gi = g.data() + static_cast<std::size_t>(i) * r;
                 double* dai = da.data() + static_cast<std::size_t>(i) * q;
                 for (int k = 0; k < q; ++k) {
                   const double* Bk = B + static_cast<std::size_t>(k) * r;
                   double acc = 0.0;
                   for (int j = 0; j < r; ++j) acc += gi[j] * Bk[j];
                   dai[k] += acc;
                 }
               }
             }
             if (ib >= 0) {
               std::vector<double>& db = tp.grad_buf(ib);
               const double* A = av->data();
               for (int i = 0; i < p; ++i) {
                 const double* gi = g.data() + static_cast<std::size_t>(i) * r;
                 const double* Ai = A + static_cast<std::size_t>(i) * q;
                 for (int k = 0; k < q; ++k) {
                   const double aik = Ai[k];
                   if (aik == 0.0) continue;
                   double* dbk = db.data() + static_cast<std::size_t>(k) * r;
                   for (int j = 0; j < r; ++j) dbk[j] += aik * gi[j];
                 }
               }
             }
           });
  }
  return out;
}

namespace {

template <typename Fwd, typename Bwd>
Tensor binary_same_shape(const char* name, const Tensor& a, const Tensor& b, Fwd fwd, Bwd bwd) {
  shape_guard(a.shape == b.shape,
              std::string(name) + ": shapes differ: " + shape_str(a) + " vs " + shape_str(b));
  Tensor out(a.rows(), a.cols());
  const std::size_t n = out.numel();
  for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = fwd((*a.data)[i], (*b.data)[i]);
  Tape* t = record_of({&a, &b});
  if (t) {
    const int ia = (a.tape == t) ? a.node : -1;
    const int ib = (b.tape == t) ? b.node : -1;
    Buf av = a.data, bv = b.data;
    finish(out, t, name, {ia, ib},
           [ia, ib, av, bv, bwd](Tape& tp, const std::vector<double>& g) {
             const std::size_t n = g.size();
             for (std::size_t i = 0; i < n; ++i) {
               const auto [da, db] = bwd(g[i], (*av)[i], (*bv)[i]);
               if (ia >= 0) tp.grad_buf(ia)[i] += da;
               if (ib >= 0) tp.grad_buf(ib)[i] += db;
             }
           });
  }
  return out;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_same_shape(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double g, double, double) { return std::pair<double, double>{g, g}; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_same_shape(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double g, double, double) { return std::pair<double, double>{g, -g}; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_same_shape(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double g, double x, double y) { return std::pair<double, double>{g * y, g * x}; });
}

Tensor scale(const Tensor& a, double c) {
  Tensor out(a.rows(), a.cols());
  const std::size_t n = out.numel();
  for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = (*a.data)[i] * c;
  Tape* t = record_of({&a});
  if (t) {
    const int ia = a.node;
    finish(out, t, "scale", {ia}, [ia, c](Tape& tp, const std::vector<double>& g) {
      std::vector<double>& da = tp.grad_buf(ia);
      for (std::size_t i = 0; i < g.size(); ++i) da[i] += c * g[i];
    });
  }
  return out;
}

Tensor concat(const std::vector<const Tensor*>& parts, int axis) {
  shape_guard(!parts.empty(), "concat: empty tensor list");
  shape_guard(axis == 0 || axis == 1, "concat: axis must be 0 or 1");
  const Tensor& first = *parts[0];
  int rows = first.rows(), cols = first.cols();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const Tensor& p = *parts[i];
    if (axis == 0) {
      shape_guard(p.cols() == cols, "concat: column mismatch: " + shape_str(first) + " vs " +
                                        shape_str(p));
      rows += p.rows();
    } else {
      shape_guard(p.rows() == rows, "concat: row mismatch: " + shape_str(first) + " vs " +
                                        shape_str(p));
      cols += p.cols();
    }
  }
  Tensor out(rows, cols);
  if (axis == 0) {
    std::size_t off = 0;
    for (const Tensor* p : parts) {
      std::copy(p->data->begin(), p->data->end(), out.data->begin() + off);
      off += p->numel();
    }
  } else {
    int coff = 0;
    for (const Tensor* p : parts) {
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < p->cols(); ++c) out.at(r, coff + c) = p->at(r, c);
      }
      coff += p->cols();
    }
  }

  Tape* t = nullptr;
  for (const Tensor* p : parts) {
    if (p->tracked()) {
      if (t && p->tape != t) throw std::logic_error("concat: inputs on different records");
      t = p->tape;
    }
  }
  if (t) {
    std::vector<int> ids;
    std::vector<int> prows, pcols;
    for (const Tensor* p : parts) {
      ids.push_back(p->tracked() ? p->node : -1);
      prows.push_back(p->rows());
      pcols.push_back(p->cols());
    }
    finish(out, t, "concat", ids,
           [ids, prows, pcols, axis, cols](Tape& tp, const std::vector<double>& g) {
             if (axis == 0) {
               std::size_t off = 0;
               for (std::size_t k = 0; k < ids.size(); ++k) {
                 const std::size_t n = static_cast<std::size_t>(prows[k]) * pcols[k];
                 if (ids[k] >= 0) {
                   std::vector<double>& d = tp.grad_buf(ids[k]);
                   for (std::size_t i = 0; i < n; ++i) d[i] += g[off + i];
                 }
                 off += n;
               }
             } else {
               int coff = 0;
               for (std::size_t k = 0; k < ids.size(); ++k) {
                 if (ids[k] >= 0) {
                   std::vector<double>& d = tp.grad_buf(ids[k]);
                   for (int r = 0; r < prows[k]; ++r) {
                     for (int c = 0; c < pcols[k]; ++c) {
                       d[static_cast<std::size_t>(r) * pcols[k] + c] +=
                           g[static_cast<std::size_t>(r) * cols + coff + c];
                     }
                   }
                 }
                 coff += pcols[k];
               }
             }
           });
  }
  return out;
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
  std::vector<const Tensor*> ptrs;
  ptrs.reserve(parts.size());
  for (const Tensor& p : parts) ptrs.push_back(&p);
  return concat(ptrs, axis);
}

Tensor concat(std::initializer_list<const Tensor*> parts, int axis) {
  return concat(std::vector<const Tensor*>(parts), axis);
}

Tensor select_row(const Tensor& x, int row) {
  shape_guard(row >= 0 && row < x.rows(),
              "select_row: row " + std::to_string(row) + " out of range for " + shape_str(x));
  return block(x, row, row + 1, 0, x.cols());
}

Tensor block(const Tensor& x, int r0, int r1, int c0, int c1) {
  shape_guard(0 <= r0 && r0 < r1 && r1 <= x.rows() && 0 <= c0 && c0 < c1 && c1 <= x.cols(),
              "block: [" + std::to_string(r0) + "," + std::to_string(r1) + ")x[" +
                  std::to_string(c0) + "," + std::to_string(c1) + ") out of range for " +
                  shape_str(x));
  Tensor out(r1 - r0, c1 - c0);
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) out.at(r - r0, c - c0) = x.at(r, c);
  }
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    const int xc = x.cols();
    finish(out, t, "block", {ix},
           [ix, r0, r1, c0, c1, xc](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(ix);
             const int w = c1 - c0;
             for (int r = r0; r < r1; ++r) {
               for (int c = c0; c < c1; ++c) {
                 d[static_cast<std::size_t>(r) * xc + c] +=
                     g[static_cast<std::size_t>(r - r0) * w + (c - c0)];
               }
             }
           });
  }
  return out;
}

Tensor transpose(const Tensor& x) {
  Tensor out(x.cols(), x.rows());
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) out.at(c, r) = x.at(r, c);
  }
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    const int xr = x.rows(), xc = x.cols();
    finish(out, t, "transpose", {ix}, [ix, xr, xc](Tape& tp, const std::vector<double>& g) {
      std::vector<double>& d = tp.grad_buf(ix);
      for (int r = 0; r < xr; ++r) {
        for (int c = 0; c < xc; ++c) {
          d[static_cast<std::size_t>(r) * xc + c] += g[static_cast<std::size_t>(c) * xr + r];
        }
      }
    });
  }
  return out;
}

Tensor reshape_row(const Tensor& x) {
  Tensor out(1, static_cast<int>(x.numel()), *x.data);
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    finish(out, t, "reshape_row", {ix}, [ix](Tape& tp, const std::vector<double>& g) {
      std::vector<double>& d = tp.grad_buf(ix);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
    });
  }
  return out;
}

Tensor gather_rows(const Tensor& table, const std::vector<int>& indices) {
  shape_guard(!indices.empty(), "gather_rows: empty index list");
  const int cols = table.cols();
  for (int id : indices) {
    shape_guard(id >= 0 && id < table.rows(),
                "gather_rows: index " + std::to_string(id) + " out of range for " +
                    shape_str(table));
  }
  Tensor out(static_cast<int>(indices.size()), cols);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const double* src = table.ptr() + static_cast<std::size_t>(indices[r]) * cols;
    std::copy(src, src + cols, out.ptr() + r * cols);
  }
  Tape* t = record_of({&table});
  if (t) {
    const int it = table.node;
    finish(out, t, "gather_rows", {it},
           [it, indices, cols](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(it);
             for (std::size_t r = 0; r < indices.size(); ++r) {
               double* dst = d.data() + static_cast<std::size_t>(indices[r]) * cols;
               const double* src = g.data() + r * cols;
               for (int c = 0; c < cols; ++c) dst[c] += src[c];
             }
           });
  }
  return out;
}

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

template <typename Fwd, typename Bwd>
Tensor unary_elementwise(const char* name, const Tensor& x, Fwd fwd, Bwd bwd_from_x_and_y) {
  Tensor out(x.rows(), x.cols());
  const std::size_t n = out.numel();
  for (std::size_t i = 0; i < n; ++i) (*out.data)[i] = fwd((*x.data)[i]);
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    Buf xv = x.data, yv = out.data;
    finish(out, t, name, {ix},
           [ix, xv, yv, bwd_from_x_and_y](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(ix);
             for (std::size_t i = 0; i < g.size(); ++i) {
               d[i] += g[i] * bwd_from_x_and_y((*xv)[i], (*yv)[i]);
             }
           });
  }
  return out;
}

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor gelu(const Tensor& x) {
  return unary_elementwise(
      "gelu", x,
      [](double v) { return 0.5 * v * (1.0 + std::erf(v * kInvSqrt2)); },
      [](double v, double) {
        const double phi_cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
        const double phi_pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
        return phi_cdf + v * phi_pdf;
      });
}

Tensor sigmoid(const Tensor& x) {
  return unary_elementwise(
      "sigmoid", x, [](double v) { return stable_sigmoid(v); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& x) {
  return unary_elementwise(
      "tanh", x, [](double v) { return std::tanh(v); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor softmax(const Tensor& x, int axis) {
  shape_guard(axis == 0 || axis == 1, "softmax: axis must be 0 or 1");
  Tensor out(x.rows(), x.cols());
  const int nslices = (axis == 1) ? x.rows() : x.cols();
  const int len = (axis == 1) ? x.cols() : x.rows();
  const int stride = (axis == 1) ? 1 : x.cols();
  const int slice_stride = (axis == 1) ? x.cols() : 1;
  for (int s = 0; s < nslices; ++s) {
    const double* in = x.ptr() + static_cast<std::size_t>(s) * slice_stride;
    double* o = out.ptr() + static_cast<std::size_t>(s) * slice_stride;
    double mx = in[0];
    for (int i = 1; i < len; ++i) mx = std::max(mx, in[static_cast<std::size_t>(i) * stride]);
    double sum = 0.0;
    for (int i = 0; i < len; ++i) {
      const double e = std::exp(in[static_cast<std::size_t>(i) * stride] - mx);
      o[static_cast<std::size_t>(i) * stride] = e;
      sum += e;
    }
    for (int i = 0; i < len; ++i) o[static_cast<std::size_t>(i) * stride] /= sum;
  }
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    Buf yv = out.data;
    const int rows = x.rows(), cols = x.cols();
    finish(out, t, "softmax", {ix},
           [ix, yv, axis, rows, cols](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(ix);
             const int nslices = (axis == 1) ? rows : cols;
             const int len = (axis == 1) ? cols : rows;
             const int stride = (axis == 1) ? 1 : cols;
             const int slice_stride = (axis == 1) ? cols : 1;
             for (int s = 0; s < nslices; ++s) {
               const double* y = yv->data() + static_cast<std::size_t>(s) * slice_stride;
               const double* gg = g.data() + static_cast<std::size_t>(s) * slice_stride;
               double dot = 0.0;
               for (int i = 0; i < len; ++i) {
                 const std::size_t k = static_cast<std::size_t>(i) * stride;
                 dot += gg[k] * y[k];
               }
               double* dd = d.data() + static_cast<std::size_t>(s) * slice_stride;
               for (int i = 0; i < len; ++i) {
                 const std::size_t k = static_cast<std::size_t>(i) * stride;
                 dd[k] += y[k] * (gg[k] - dot);
               }
             }
           });
  }
  return out;
}

Tensor cross_entropy(const Tensor& probs, const std::vector<int>& truth) {
  shape_guard(static_cast<int>(truth.size()) == probs.rows(),
              "cross_entropy: " + std::to_string(truth.size()) + " labels for " +
                  shape_str(probs) + " probabilities");
  const int n = probs.rows(), l = probs.cols();
  for (int i = 0; i < n; ++i) {
    if (truth[i] < 0 || truth[i] >= l) {
      throw std::out_of_range("cross_entropy: label index " + std::to_string(truth[i]) +
                              " out of range at row " + std::to_string(i));
    }
    double s = 0.0;
    for (int j = 0; j < l; ++j) s += probs.at(i, j);
    if (std::abs(s - 1.0) > 1e-6) {
      throw std::invalid_argument("cross_entropy: row " + std::to_string(i) +
                                  " sums to " + std::to_string(s) + ", not 1");
    }
  }
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    loss -= std::log(std::max(probs.at(i, truth[i]), kLogFloor));
  }
  Tensor out = Tensor::scalar(loss);
  Tape* t = record_of({&probs});
  if (t) {
    const int ip = probs.node;
    Buf pv = probs.data;
    finish(out, t, "cross_entropy", {ip},
           [ip, pv, truth, l](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(ip);
             for (std::size_t i = 0; i < truth.size(); ++i) {
               const std::size_t k = i * l + truth[i];
               const double p = (*pv)[k];
               if (p > kLogFloor) d[k] += -g[0] / p;
             }
           });
  }
  return out;
}

Tensor sum_all(const Tensor& x) {
  double s = 0.0;
  for (double v : *x.data) s += v;
  Tensor out = Tensor::scalar(s);
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    finish(out, t, "sum_all", {ix}, [ix](Tape& tp, const std::vector<double>& g) {
      std::vector<double>& d = tp.grad_buf(ix);
      for (double& v : d) v += g[0];
    });
  }
  return out;
}

Tensor weighted_sum(const Tensor& weights, const std::vector<const Tensor*>& parts) {
  shape_guard(weights.rows() == 1 && weights.cols() == static_cast<int>(parts.size()),
              "weighted_sum: " + shape_str(weights) + " weights for " +
                  std::to_string(parts.size()) + " parts");
  shape_guard(!parts.empty(), "weighted_sum: empty part list");
  const int d = parts[0]->cols();
  for (const Tensor* p : parts) {
    shape_guard(p->rows() == 1 && p->cols() == d,
                "weighted_sum: part shape " + shape_str(*p) + " != [1x" + std::to_string(d) + "]");
  }
  Tensor out(1, d);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const double w = weights.at(0, static_cast<int>(k));
    const double* pv = parts[k]->ptr();
    for (int i = 0; i < d; ++i) (*out.data)[i] += w * pv[i];
  }
  Tape* t = nullptr;
  {
    std::vector<const Tensor*> all = parts;
    all.push_back(&weights);
    for (const Tensor* p : all) {
      if (p->tracked()) {
        if (t && p->tape != t) throw std::logic_error("weighted_sum: inputs on different records");
        t = p->tape;
      }
    }
  }
  if (t) {
    std::vector<int> ids;
    std::vector<Buf> bufs;
    for (const Tensor* p : parts) {
      ids.push_back(p->tracked() ? p->node : -1);
      bufs.push_back(p->data);
    }
    const int iw = weights.tracked() ? weights.node : -1;
    Buf wv = weights.data;
    std::vector<int> node_ids = ids;
    node_ids.push_back(iw);
    finish(out, t, "weighted_sum", node_ids,
           [ids, bufs, iw, wv, d](Tape& tp, const std::vector<double>& g) {
             for (std::size_t k = 0; k < ids.size(); ++k) {
               if (iw >= 0) {
                 double acc = 0.0;
                 const double* pv = bufs[k]->data();
                 for (int i = 0; i < d; ++i) acc += g[i] * pv[i];
                 tp.grad_buf(iw)[k] += acc;
               }
               if (ids[k] >= 0) {
                 std::vector<double>& dp = tp.grad_buf(ids[k]);
                 const double w = (*wv)[k];
                 for (int i = 0; i < d; ++i) dp[i] += w * g[i];
               }
             }
           });
  }
  return out;
}

Tensor add_outer(const Tensor& col, const Tensor& m) {
  shape_guard(col.rows() == 1 && col.cols() == m.rows(),
              "add_outer: " + shape_str(col) + " against " + shape_str(m));
  const int p = m.rows(), q = m.cols();
  Tensor out(p, q);
  for (int i = 0; i < p; ++i) {
    const double c = col.at(0, i);
    for (int j = 0; j < q; ++j) out.at(i, j) = c + m.at(i, j);
  }
  Tape* t = record_of({&col, &m});
  if (t) {
    const int ic = (col.tape == t) ? col.node : -1;
    const int im = (m.tape == t) ? m.node : -1;
    finish(out, t, "add_outer", {ic, im},
           [ic, im, p, q](Tape& tp, const std::vector<double>& g) {
             if (ic >= 0) {
               std::vector<double>& d = tp.grad_buf(ic);
               for (int i = 0; i < p; ++i) {
                 double acc = 0.0;
                 for (int j = 0; j < q; ++j) acc += g[static_cast<std::size_t>(i) * q + j];
                 d[i] += acc;
               }
             }
             if (im >= 0) {
               std::vector<double>& d = tp.grad_buf(im);
               for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
             }
           });
  }
  return out;
}

Tensor logsumexp_cols(const Tensor& m) {
  const int p = m.rows(), q = m.cols();
  Tensor out(1, q);
  for (int j = 0; j < q; ++j) {
    double mx = m.at(0, j);
    for (int i = 1; i < p; ++i) mx = std::max(mx, m.at(i, j));
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += std::exp(m.at(i, j) - mx);
    out.at(0, j) = mx + std::log(s);
  }
  Tape* t = record_of({&m});
  if (t) {
    const int im = m.node;
    Buf mv = m.data, yv = out.data;
    finish(out, t, "logsumexp_cols", {im},
           [im, mv, yv, p, q](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(im);
             for (int j = 0; j < q; ++j) {
               const double y = (*yv)[j];
               for (int i = 0; i < p; ++i) {
                 d[static_cast<std::size_t>(i) * q + j] +=
                     g[j] * std::exp((*mv)[static_cast<std::size_t>(i) * q + j] - y);
               }
             }
           });
  }
  return out;
}

Tensor logsumexp_row(const Tensor& x) {
  shape_guard(x.rows() == 1, "logsumexp_row: expected a row, got " + shape_str(x));
  const int q = x.cols();
  double mx = x.at(0, 0);
  for (int j = 1; j < q; ++j) mx = std::max(mx, x.at(0, j));
  double s = 0.0;
  for (int j = 0; j < q; ++j) s += std::exp(x.at(0, j) - mx);
  Tensor out = Tensor::scalar(mx + std::log(s));
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    Buf xv = x.data, yv = out.data;
    finish(out, t, "logsumexp_row", {ix},
           [ix, xv, yv](Tape& tp, const std::vector<double>& g) {
             std::vector<double>& d = tp.grad_buf(ix);
             const double y = (*yv)[0];
             for (std::size_t j = 0; j < d.size(); ++j) {
               d[j] += g[0] * std::exp((*xv)[j] - y);
             }
           });
  }
  return out;
}

Tensor gather_sum(const Tensor& x, const std::vector<std::pair<int, int>>& at) {
  double s = 0.0;
  for (const auto& [i, j] : at) {
    shape_guard(i >= 0 && i < x.rows() && j >= 0 && j < x.cols(),
                "gather_sum: (" + std::to_string(i) + "," + std::to_string(j) +
                    ") out of range for " + shape_str(x));
    s += x.at(i, j);
  }
  Tensor out = Tensor::scalar(s);
  Tape* t = record_of({&x});
  if (t) {
    const int ix = x.node;
    const int cols = x.cols();
    finish(out, t, "gather_sum", {ix}, [ix, at, cols](Tape& tp, const std::vector<double>& g) {
      std::vector<double>& d = tp.grad_buf(ix);
      for (const auto& [i, j] : at) d[static_cast<std::size_t>(i) * cols + j] += g[0];
    });
  }
  return out;
}

int argmax_row(const Tensor& x, int row) {
  int best = 0;
  double bv = x.at(row, 0);
  for (int j = 1; j < x.cols(); ++j) {
    if (x.at(row, j) > bv) {
      bv = x.at(row, j);
      best = j;
    }
  }
  return best;
}

}  // namespace cofenet
