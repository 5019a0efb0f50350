#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "pdtab/autodiff/node.hpp"

namespace pdtab::ad {

struct GradCheckOptions {
  double step = 1e-5;
  // Coordinates probed across all parameters; 0 means every coordinate.
  std::size_t samples = 0;
  std::uint64_t seed = 7;
  // Relative error is |analytic - numeric| / max(|analytic|, |numeric|, floor).
  double floor = 1e-6;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
};

// Compares reverse-mode gradients of `loss_fn` (which must rebuild the graph
// from the current parameter values on every call, deterministically) with
// central differences on a sample of parameter coordinates.
GradCheckResult gradient_check(const std::function<Var()>& loss_fn, ParameterList& params,
                               const GradCheckOptions& options = {});

}  // namespace pdtab::ad
