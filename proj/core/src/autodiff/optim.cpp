#include "pdtab/autodiff/optim.hpp"

#include <cmath>

#include "pdtab/errors.hpp"

namespace pdtab::ad {

AdamState AdamState::for_parameters(const ParameterList& params) {
  AdamState s;
  for (const auto& p : params) {
    s.first_moment.push_back(Tensor::zeros_like(p.var.value()));
    s.second_moment.push_back(Tensor::zeros_like(p.var.value()));
  }
  return s;
}

void adam_step(ParameterList& params, AdamState& state, const AdamHyper& hyper) {
  if (!(hyper.lr > 0.0)) throw UsageError("adam_step: learning rate must be positive");
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                         " tensors but " + std::to_string(params.size()) + " parameters were given");
  }
  ++state.step_count;
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step_count));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& w = params[p].var.mutable_value();
    Tensor& g = params[p].var.mutable_grad();
    Tensor& m = state.first_moment[p];
    Tensor& v = state.second_moment[p];
    if (m.shape() != w.shape()) throw DimensionError("adam_step: moment shape mismatch for " + params[p].name);
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g[i];
      v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      w[i] -= hyper.lr * mh / (std::sqrt(vh) + hyper.eps);
    }
    g.fill(0.0);
  }
}

void zero_grads(ParameterList& params) {
  for (auto& p : params) p.var.zero_grad();
}

}  // namespace pdtab::ad
