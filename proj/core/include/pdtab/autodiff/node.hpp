#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pdtab/autodiff/tensor.hpp"

namespace pdtab::ad {

struct Node;
using NodePtr = std::shared_ptr<Node>;

// One vertex of a define-by-run graph. `backward_fn` reads this node's grad
// and accumulates into the parents' grads; it never captures the node itself,
// so ownership only flows from children to parents and the graph stays
// acyclic.
struct Node {
  Tensor value;
  Tensor grad;
  const char* op_tag = "leaf";
  std::vector<NodePtr> parents;
  std::function<void(Node&)> backward_fn;
};

// Handle to a graph node. Copies share the node.
class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, const char* tag = "leaf");
  explicit Var(NodePtr node) : node_(std::move(node)) {}

  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  const Tensor& grad() const { return node_->grad; }
  Tensor& mutable_grad() { return node_->grad; }
  const Shape& shape() const { return node_->value.shape(); }
  const char* op_tag() const { return node_->op_tag; }
  const std::vector<NodePtr>& parents() const { return node_->parents; }

  void zero_grad() { node_->grad.fill(0.0); }

  const NodePtr& node() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  NodePtr node_;
};

// Builds a non-leaf node. The grad buffer is allocated zeroed alongside the value.
Var make_node(Tensor value, const char* tag, std::vector<NodePtr> parents,
              std::function<void(Node&)> backward_fn);

// Trainable leaf with a stable dotted name such as "mlp.layer0.W".
struct Parameter {
  std::string name;
  Var var;
};

using ParameterList = std::vector<Parameter>;

// Reverse-mode sweep from a scalar loss. Interior grads are reset on every call
// and the loss is seeded with 1; leaf grads accumulate across calls until the
// caller zeroes them.
void backward(const Var& loss);

}  // namespace pdtab::ad
