#include "pdtab/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pdtab/autodiff/optim.hpp"
#include "pdtab/random.hpp"

namespace pdtab::ad {

GradCheckResult gradient_check(const std::function<Var()>& loss_fn, ParameterList& params,
                               const GradCheckOptions& options) {
  zero_grads(params);
  backward(loss_fn());

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t p = 0; p < params.size(); ++p)
    for (std::size_t i = 0; i < params[p].var.value().size(); ++i) coords.emplace_back(p, i);
  if (options.samples > 0 && options.samples < coords.size()) {
    Rng rng(options.seed);
    rng.shuffle(coords);
    coords.resize(options.samples);
  }

  GradCheckResult result;
  for (const auto& [p, i] : coords) {
    Tensor& w = params[p].var.mutable_value();
    const double analytic = params[p].var.grad()[i];
    const double saved = w[i];
    w[i] = saved + options.step;
    const double up = loss_fn().value()[0];
    w[i] = saved - options.step;
    const double down = loss_fn().value()[0];
    w[i] = saved;
    const double numeric = (up - down) / (2.0 * options.step);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), options.floor});
    result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic - numeric) / denom);
    ++result.coordinates;
  }
  zero_grads(params);
  return result;
}

}  // namespace pdtab::ad
