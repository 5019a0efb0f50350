#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "pdtab/autodiff/node.hpp"
#include "pdtab/autodiff/ops.hpp"
#include "pdtab/autodiff/tensor.hpp"
#include "pdtab/random.hpp"

namespace pdtab::testing {

inline ad::Tensor random_tensor(ad::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  ad::Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

inline ad::Parameter make_param(std::string name, ad::Tensor value) {
  return ad::Parameter{std::move(name), ad::Var(std::move(value))};
}

// Scalar probe sum(out * w) with fixed random w, so every output coordinate
// contributes a distinct weight to the gradient.
inline ad::Var weighted_sum(const ad::Var& out, const ad::Tensor& w) {
  return ad::sum(ad::mul(out, ad::constant(w)));
}

inline double max_abs_diff(const ad::Tensor& a, const ad::Tensor& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace pdtab::testing
