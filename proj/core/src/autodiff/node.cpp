#include "pdtab/autodiff/node.hpp"

#include <unordered_set>

#include "pdtab/errors.hpp"

namespace pdtab::ad {

Var::Var(Tensor value, const char* tag) : node_(std::make_shared<Node>()) {
  node_->grad = Tensor::zeros_like(value);
  node_->value = std::move(value);
  node_->op_tag = tag;
}

Var make_node(Tensor value, const char* tag, std::vector<NodePtr> parents,
              std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->grad = Tensor::zeros_like(value);
  node->value = std::move(value);
  node->op_tag = tag;
  node->parents = std::move(parents);
  node->backward_fn = std::move(backward_fn);
  return Var(std::move(node));
}

void backward(const Var& loss) {
  if (!loss) throw UsageError("backward on an empty Var");
  if (loss.value().size() != 1) {
    throw UsageError("backward requires a scalar loss, got shape " + shape_string(loss.shape()));
  }

  // Iterative post-order DFS gives a topological order (parents before children).
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  visited.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node* n : order) {
    if (!n->parents.empty()) n->grad.fill(0.0);
  }
  loss.node()->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn) n->backward_fn(*n);
  }
}

}  // namespace pdtab::ad
