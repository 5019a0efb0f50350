#pragma once

#include <cstdint>
#include <vector>

#include "pdtab/autodiff/node.hpp"

namespace pdtab::ad {

struct AdamState {
  std::int64_t step_count = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  // Zeroed moments shaped like each parameter.
  static AdamState for_parameters(const ParameterList& params);
};

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update over every parameter, then zeroes the grads.
void adam_step(ParameterList& params, AdamState& state, const AdamHyper& hyper);

void zero_grads(ParameterList& params);

}  // namespace pdtab::ad
