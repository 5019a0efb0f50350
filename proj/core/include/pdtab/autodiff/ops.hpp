#pragma once

#include <cstddef>
#include <vector>

#include "pdtab/autodiff/node.hpp"
#include "pdtab/random.hpp"

namespace pdtab::ad {

// Leaf that does not take part in optimisation (inputs, targets).
inline Var constant(Tensor t) { return Var(std::move(t), "constant"); }

// [m x k] . [k x n] -> [m x n]
Var matmul(const Var& a, const Var& b);

// Elementwise on equal shapes.
Var add(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& x, double factor);

// [m x n] + bias[n], broadcast over rows. The only broadcast the engine supports.
Var add_row_bias(const Var& x, const Var& bias);

// max(0, x) with subgradient 0 at the kink.
Var relu(const Var& x);
Var sigmoid(const Var& x);

// Max-subtracted softmax over the last axis of a 2-D tensor.
Var softmax_rows(const Var& x);

// Per-row standardisation followed by gain/bias over the columns.
Var layer_norm(const Var& x, const Var& gain, const Var& bias, double eps = 1e-5);

// Summed binary cross-entropy. Probabilities are clamped to [1e-7, 1-1e-7]
// before the log; the gradient is evaluated at the clamped value.
Var binary_cross_entropy(const Var& y_hat, const Tensor& y);

Var sum(const Var& x);
Var mean(const Var& x);
Var reshape(const Var& x, Shape shape);

// Inverted dropout: survivors are scaled by 1/(1-p). p == 0 returns x unchanged.
Var dropout(const Var& x, double p, Rng& rng);

// Tokenises a feature matrix: row i, feature j becomes token (i*F + j) with
// value x[i,j] * weight[j,:] + bias[j,:].  [n x F] -> [n*F x d]
Var feature_embedding(const Var& x, const Var& weight, const Var& bias);

// Mean over consecutive blocks of `group` rows.  [G*group x d] -> [G x d]
Var group_mean_rows(const Var& x, std::size_t group);

// Post-softmax attention weights, laid out [group][head][query][key].
struct AttentionWeights {
  std::size_t groups = 0;
  std::size_t heads = 0;
  std::size_t tokens = 0;
  std::vector<double> weights;

  double at(std::size_t g, std::size_t h, std::size_t i, std::size_t j) const {
    return weights[((g * heads + h) * tokens + i) * tokens + j];
  }
};

// Multi-head scaled dot-product attention over independent groups.
//
// q, k, v are [groups*T x D]; rows [g*T, (g+1)*T) form group g and head h
// reads columns [h*D/heads, (h+1)*D/heads). Within each (group, head)
// the weights are softmax_j(q_i . k_j / sqrt(D/heads)) and the output row i is
// the weighted sum of value rows. Weights go through dropout when p > 0.
// `trace`, when given, receives the pre-dropout weights.
Var multi_head_attention(const Var& q, const Var& k, const Var& v, std::size_t groups,
                         std::size_t heads, double dropout_p = 0.0, Rng* rng = nullptr,
                         AttentionWeights* trace = nullptr);

// Batch statistics of one virtual batch, for running-average updates.
struct ChunkStats {
  std::size_t rows = 0;
  std::vector<double> mean;
  std::vector<double> var;  // biased
};

// Ghost batch normalisation: rows are cut into consecutive chunks of
// `virtual_batch` (the last may be shorter); each chunk is normalised with its
// own column moments, then gain/bias are applied.
Var ghost_batch_norm(const Var& x, const Var& gain, const Var& bias, std::size_t virtual_batch,
                     double eps = 1e-5, std::vector<ChunkStats>* stats = nullptr);

// Batch normalisation with frozen moments (inference mode).
Var batch_norm_inference(const Var& x, const Tensor& mean, const Tensor& var, const Var& gain,
                         const Var& bias, double eps = 1e-5);

}  // namespace pdtab::ad
