#include "cofenet/grad_check.hpp"

#include <cmath>
#include <map>

namespace cofenet {

namespace {

void detach(const std::vector<ParamRef>& params) {
  for (const ParamRef& p : params) {
    p.tensor->tape = nullptr;
    p.tensor->node = -1;
  }
}

}  // namespace

GradCheckReport grad_check(const std::function<Tensor()>& loss_fn,
                           const std::vector<ParamRef>& params, double step) {
  // Analytic pass on a fresh record.
  std::map<std::string, std::vector<double>> analytic;
  {
    Tape tape;
    for (const ParamRef& p : params) tape.watch(*p.tensor);
    Tensor loss = loss_fn();
    tape.backward(loss);
    for (const ParamRef& p : params) analytic[p.name] = tape.grad(*p.tensor);
  }
  detach(params);

  GradCheckReport report;
  for (const ParamRef& p : params) {
    GradCheckReport::Entry entry;
    entry.name = p.name;
    std::vector<double>& w = p.tensor->vals();
    const std::vector<double>& a = analytic[p.name];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + step;
      const double up = loss_fn().item();
      w[i] = saved - step;
      const double down = loss_fn().item();
      w[i] = saved;
      const double fd = (up - down) / (2.0 * step);
      const double abs_err = std::abs(a[i] - fd);
      const double rel_err = abs_err / std::max({std::abs(a[i]), std::abs(fd), 1e-3});
      entry.max_abs_err = std::max(entry.max_abs_err, abs_err);
      entry.max_rel_err = std::max(entry.max_rel_err, rel_err);
    }
    report.worst_rel_err = std::max(report.worst_rel_err, entry.max_rel_err);
    report.per_param.push_back(std::move(entry));
  }
  return report;
}

}  // namespace cofenet
