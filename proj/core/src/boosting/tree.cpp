#include "pdtab/boosting/tree.hpp"

#include <algorithm>
#include <numeric>

#include "pdtab/errors.hpp"

namespace pdtab::boost {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, int max_depth)
    : nodes_(std::move(nodes)), max_depth_(max_depth) {
  if (nodes_.empty()) throw UsageError("regression tree needs at least one node");
}

RegressionTree RegressionTree::constant(double value, int max_depth) {
  TreeNode leaf;
  leaf.value = value;
  return RegressionTree({leaf}, max_depth);
}

std::size_t RegressionTree::leaf_index(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return i;
}

double RegressionTree::predict(std::span<const double> row) const { return nodes_[leaf_index(row)].value; }

std::vector<double> RegressionTree::predict(const ad::Tensor& x) const {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = predict(x.data().subspan(i * d, d));
  return out;
}

int RegressionTree::depth() const {
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.is_leaf()) {
      deepest = std::max(deepest, d);
    } else {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return deepest;
}

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const ad::Tensor& x, std::span<const double> r, const TreeConfig& config)
      : x_(x), r_(r), config_(config), d_(x.cols()) {}

  int build(std::vector<std::size_t>& rows, int depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double total = 0.0;
    double lo = r_[rows.front()], hi = lo;
    for (const auto i : rows) {
      total += r_[i];
      lo = std::min(lo, r_[i]);
      hi = std::max(hi, r_[i]);
    }
    nodes_[static_cast<std::size_t>(index)].value = total / static_cast<double>(rows.size());

    const std::size_t msl = std::max<std::size_t>(config_.min_samples_leaf, 1);
    if (depth >= config_.max_depth || rows.size() < 2 * msl || lo == hi) return index;

    const SplitChoice best = best_split(rows, msl);
    if (!best.found) return index;

    std::vector<std::size_t> left, right;
    for (const auto i : rows) (x_.at(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(i);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(index)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  std::vector<TreeNode> take() { return std::move(nodes_); }

 private:
  SplitChoice best_split(const std::vector<std::size_t>& rows, std::size_t msl) const {
    SplitChoice best;
    const std::size_t n = rows.size();
    std::vector<std::size_t> order(rows);
    double sum_all = 0.0, sq_all = 0.0;
    for (const auto i : rows) {
      sum_all += r_[i];
      sq_all += r_[i] * r_[i];
    }
    for (std::size_t f = 0; f < d_; ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_.at(a, f) < x_.at(b, f); });
      double sum_l = 0.0, sq_l = 0.0;
      for (std::size_t k = 1; k < n; ++k) {
        const double rv = r_[order[k - 1]];
        sum_l += rv;
        sq_l += rv * rv;
        const double a = x_.at(order[k - 1], f), b = x_.at(order[k], f);
        if (a == b || k < msl || n - k < msl) continue;
        const auto nl = static_cast<double>(k), nr = static_cast<double>(n - k);
        const double sum_r = sum_all - sum_l, sq_r = sq_all - sq_l;
        const double sse = (sq_l - sum_l * sum_l / nl) + (sq_r - sum_r * sum_r / nr);
        if (!best.found || sse < best.sse) {
          double mid = a + (b - a) * 0.5;
          if (!(mid < b)) mid = a;
          best = {true, static_cast<int>(f), mid, sse};
        }
      }
    }
    return best;
  }

  const ad::Tensor& x_;
  std::span<const double> r_;
  TreeConfig config_;
  std::size_t d_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree fit_tree(const ad::Tensor& x, std::span<const double> residuals, const TreeConfig& config) {
  if (x.rank() != 2 || x.rows() != residuals.size() || residuals.empty()) {
    throw DimensionError("fit_tree: " + ad::shape_string(x.shape()) + " inputs vs " +
                         std::to_string(residuals.size()) + " residuals");
  }
  if (config.max_depth < 0) throw UsageError("fit_tree: max_depth must be >= 0");
  std::vector<std::size_t> rows(residuals.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  TreeBuilder builder(x, residuals, config);
  builder.build(rows, 0);
  return RegressionTree(builder.take(), config.max_depth);
}

}  // namespace pdtab::boost
