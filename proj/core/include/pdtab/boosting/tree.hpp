#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pdtab/autodiff/tensor.hpp"

namespace pdtab::boost {

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

struct TreeConfig {
  int max_depth = 3;
  std::size_t min_samples_leaf = 2;
};

// Flat binary tree. Internal nodes send x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
 public:
  RegressionTree() = default;
  RegressionTree(std::vector<TreeNode> nodes, int max_depth);

  // A single leaf with this value.
  static RegressionTree constant(double value, int max_depth = 0);

  double predict(std::span<const double> row) const;
  // Index of the leaf reached by `row`.
  std::size_t leaf_index(std::span<const double> row) const;
  std::vector<double> predict(const ad::Tensor& x) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int max_depth() const { return max_depth_; }
  // Longest root-to-leaf path, in edges.
  int depth() const;

 private:
  std::vector<TreeNode> nodes_;
  int max_depth_ = 0;
};

// Greedy CART on squared error. Each node tries every feature and every
// midpoint between consecutive distinct sorted values, keeping the split
// with the smallest summed child SSE; ties go to the lower feature index,
// then the lower threshold. A node becomes a leaf (value = mean residual)
// at max_depth, when it cannot give both children min_samples_leaf rows, or
// when its residuals are all equal.
RegressionTree fit_tree(const ad::Tensor& x, std::span<const double> residuals, const TreeConfig& config);

}  // namespace pdtab::boost
