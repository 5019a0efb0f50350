#include "pdtab/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "pdtab/errors.hpp"

namespace pdtab::ad {

namespace {

void require_rank2(const Var& x, const char* op) {
  if (x.shape().size() != 2) {
    throw DimensionError(std::string(op) + " expects a 2-D tensor, got " + shape_string(x.shape()));
  }
}

void require_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

Node& parent(Node& n, std::size_t i) { return *n.parents[i]; }

}  // namespace

Var matmul(const Var& a, const Var& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) {
    throw DimensionError("matmul: inner dimensions disagree, " + shape_string(a.shape()) + " . " +
                         shape_string(b.shape()));
  }
  Tensor out(Shape{m, n});
  const double* A = a.value().data().data();
  const double* B = b.value().data().data();
  double* C = out.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = A[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = B + p * n;
      double* crow = C + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return make_node(std::move(out), "matmul", {a.node(), b.node()}, [m, k, n](Node& self) {
    Node& na = parent(self, 0);
    Node& nb = parent(self, 1);
    const double* G = self.grad.data().data();
    const double* A = na.value.data().data();
    const double* B = nb.value.data().data();
    double* dA = na.grad.data().data();
    double* dB = nb.grad.data().data();
    // dA = G . B^T
    for (std::size_t i = 0; i < m; ++i) {
      const double* grow = G + i * n;
      for (std::size_t p = 0; p < k; ++p) {
        const double* brow = B + p * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
        dA[i * k + p] += acc;
      }
    }
    // dB = A^T . G
    for (std::size_t i = 0; i < m; ++i) {
      const double* grow = G + i * n;
      for (std::size_t p = 0; p < k; ++p) {
        const double aip = A[i * k + p];
        if (aip == 0.0) continue;
        double* dbrow = dB + p * n;
        for (std::size_t j = 0; j < n; ++j) dbrow[j] += aip * grow[j];
      }
    }
  });
}

Var add(const Var& a, const Var& b) {
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  return make_node(std::move(out), "add", {a.node(), b.node()}, [](Node& self) {
    for (std::size_t p = 0; p < 2; ++p) {
      Tensor& g = parent(self, p).grad;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape(a, b, "mul");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  return make_node(std::move(out), "mul", {a.node(), b.node()}, [](Node& self) {
    Node& na = parent(self, 0);
    Node& nb = parent(self, 1);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      na.grad[i] += self.grad[i] * nb.value[i];
      nb.grad[i] += self.grad[i] * na.value[i];
    }
  });
}

Var scale(const Var& x, double factor) {
  Tensor out = x.value();
  for (auto& v : out.storage()) v *= factor;
  return make_node(std::move(out), "scale", {x.node()}, [factor](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += factor * self.grad[i];
  });
}

Var add_row_bias(const Var& x, const Var& bias) {
  require_rank2(x, "add_row_bias");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (bias.value().size() != n) {
    throw DimensionError("add_row_bias: bias " + shape_string(bias.shape()) + " does not fit " +
                         shape_string(x.shape()));
  }
  Tensor out = x.value();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] += bias.value()[j];
  return make_node(std::move(out), "add_row_bias", {x.node(), bias.node()}, [m, n](Node& self) {
    Tensor& gx = parent(self, 0).grad;
    Tensor& gb = parent(self, 1).grad;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        gx[i * n + j] += self.grad[i * n + j];
        gb[j] += self.grad[i * n + j];
      }
  });
}

Var relu(const Var& x) {
  Tensor out = x.value();
  for (auto& v : out.storage()) v = v < 0.0 ? 0.0 : v;
  return make_node(std::move(out), "relu", {x.node()}, [](Node& self) {
    Node& nx = parent(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      if (nx.value[i] > 0.0) nx.grad[i] += self.grad[i];
  });
}

Var sigmoid(const Var& x) {
  // Clamped so that the output stays strictly inside (0, 1) in double precision.
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  Tensor out = x.value();
  for (auto& v : out.storage()) {
    const double s = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    v = std::clamp(s, lo, hi);
  }
  return make_node(std::move(out), "sigmoid", {x.node()}, [](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = self.value[i];
      g[i] += self.grad[i] * s * (1.0 - s);
    }
  });
}

Var softmax_rows(const Var& x) {
  require_rank2(x, "softmax_rows");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  Tensor out = x.value();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data().data() + i * n;
    const double mx = *std::max_element(row, row + n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += (row[j] = std::exp(row[j] - mx));
    for (std::size_t j = 0; j < n; ++j) row[j] /= total;
  }
  return make_node(std::move(out), "softmax_rows", {x.node()}, [m, n](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (std::size_t i = 0; i < m; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += self.grad[i * n + j] * self.value[i * n + j];
      for (std::size_t j = 0; j < n; ++j)
        g[i * n + j] += self.value[i * n + j] * (self.grad[i * n + j] - dot);
    }
  });
}

Var layer_norm(const Var& x, const Var& gain, const Var& bias, double eps) {
  require_rank2(x, "layer_norm");
  if (!(eps > 0.0)) throw UsageError("layer_norm: eps must be positive");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (gain.value().size() != n || bias.value().size() != n) {
    throw DimensionError("layer_norm: gain/bias must have " + std::to_string(n) + " entries");
  }
  auto normed = std::make_shared<Tensor>(Shape{m, n});
  auto inv_std = std::make_shared<std::vector<double>>(m);
  Tensor out(Shape{m, n});
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = x.value().data().data() + i * n;
    double mu = 0.0;
    for (std::size_t j = 0; j < n; ++j) mu += row[j];
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<double>(n);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[i] = is;
    for (std::size_t j = 0; j < n; ++j) {
      const double xh = (row[j] - mu) * is;
      (*normed)[i * n + j] = xh;
      out[i * n + j] = gain.value()[j] * xh + bias.value()[j];
    }
  }
  return make_node(std::move(out), "layer_norm", {x.node(), gain.node(), bias.node()},
                   [m, n, normed, inv_std](Node& self) {
                     Node& nx = parent(self, 0);
                     Node& ng = parent(self, 1);
                     Node& nb = parent(self, 2);
                     std::vector<double> dxh(n);
                     for (std::size_t i = 0; i < m; ++i) {
                       double s1 = 0.0, s2 = 0.0;
                       for (std::size_t j = 0; j < n; ++j) {
                         const double gy = self.grad[i * n + j];
                         const double xh = (*normed)[i * n + j];
                         ng.grad[j] += gy * xh;
                         nb.grad[j] += gy;
                         dxh[j] = gy * ng.value[j];
                         s1 += dxh[j];
                         s2 += dxh[j] * xh;
                       }
                       s1 /= static_cast<double>(n);
                       s2 /= static_cast<double>(n);
                       for (std::size_t j = 0; j < n; ++j) {
                         nx.grad[i * n + j] += (*inv_std)[i] * (dxh[j] - s1 - (*normed)[i * n + j] * s2);
                       }
                     }
                   });
}

constexpr double kBceLow = 1e-7;
constexpr double kBceHigh = 1.0 - 1e-7;

Var binary_cross_entropy(const Var& y_hat, const Tensor& y) {
  if (y_hat.value().size() != y.size()) {
    throw DimensionError("binary_cross_entropy: " + shape_string(y_hat.shape()) + " predictions vs " +
                         shape_string(y.shape()) + " labels");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = std::clamp(y_hat.value()[i], kBceLow, kBceHigh);
    loss -= y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
  }
  return make_node(Tensor::scalar(loss), "binary_cross_entropy", {y_hat.node()}, [y](Node& self) {
    Node& np = parent(self, 0);
    const double g = self.grad[0];
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double p = std::clamp(np.value[i], kBceLow, kBceHigh);
      np.grad[i] += g * (p - y[i]) / (p * (1.0 - p));
    }
  });
}

Var sum(const Var& x) {
  double total = 0.0;
  for (const double v : x.value().data()) total += v;
  return make_node(Tensor::scalar(total), "sum", {x.node()}, [](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (auto& v : g.storage()) v += self.grad[0];
  });
}

Var mean(const Var& x) {
  const auto n = static_cast<double>(x.value().size());
  return scale(sum(x), n > 0 ? 1.0 / n : 0.0);
}

Var reshape(const Var& x, Shape shape) {
  Tensor out = x.value().reshaped(std::move(shape));
  return make_node(std::move(out), "reshape", {x.node()}, [](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Var dropout(const Var& x, double p, Rng& rng) {
  if (p < 0.0 || p >= 1.0) throw UsageError("dropout probability must lie in [0, 1)");
  if (p == 0.0) return x;
  auto mask = std::make_shared<std::vector<double>>(x.value().size());
  const double keep_scale = 1.0 / (1.0 - p);
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i) {
    (*mask)[i] = rng.uniform() >= p ? keep_scale : 0.0;
    out[i] *= (*mask)[i];
  }
  return make_node(std::move(out), "dropout", {x.node()}, [mask](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += (*mask)[i] * self.grad[i];
  });
}

Var feature_embedding(const Var& x, const Var& weight, const Var& bias) {
  require_rank2(x, "feature_embedding");
  require_rank2(weight, "feature_embedding");
  const std::size_t n = x.shape()[0], f = x.shape()[1], d = weight.shape()[1];
  if (weight.shape()[0] != f || bias.shape() != weight.shape()) {
    throw DimensionError("feature_embedding: input " + shape_string(x.shape()) + ", weight " +
                         shape_string(weight.shape()) + ", bias " + shape_string(bias.shape()));
  }
  Tensor out(Shape{n * f, d});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < f; ++j) {
      const double xv = x.value()[i * f + j];
      for (std::size_t c = 0; c < d; ++c)
        out[(i * f + j) * d + c] = xv * weight.value()[j * d + c] + bias.value()[j * d + c];
    }
  return make_node(std::move(out), "feature_embedding", {x.node(), weight.node(), bias.node()},
                   [n, f, d](Node& self) {
                     Node& nx = parent(self, 0);
                     Node& nw = parent(self, 1);
                     Node& nb = parent(self, 2);
                     for (std::size_t i = 0; i < n; ++i)
                       for (std::size_t j = 0; j < f; ++j) {
                         const double xv = nx.value[i * f + j];
                         double dx = 0.0;
                         for (std::size_t c = 0; c < d; ++c) {
                           const double g = self.grad[(i * f + j) * d + c];
                           dx += g * nw.value[j * d + c];
                           nw.grad[j * d + c] += g * xv;
                           nb.grad[j * d + c] += g;
                         }
                         nx.grad[i * f + j] += dx;
                       }
                   });
}

Var group_mean_rows(const Var& x, std::size_t group) {
  require_rank2(x, "group_mean_rows");
  const std::size_t rows = x.shape()[0], d = x.shape()[1];
  if (group == 0 || rows % group != 0) {
    throw DimensionError("group_mean_rows: " + std::to_string(rows) + " rows not divisible into groups of " +
                         std::to_string(group));
  }
  const std::size_t g_count = rows / group;
  const double inv = 1.0 / static_cast<double>(group);
  Tensor out(Shape{g_count, d});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < d; ++c) out[(r / group) * d + c] += x.value()[r * d + c] * inv;
  return make_node(std::move(out), "group_mean_rows", {x.node()}, [rows, d, group, inv](Node& self) {
    Tensor& g = parent(self, 0).grad;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < d; ++c) g[r * d + c] += self.grad[(r / group) * d + c] * inv;
  });
}

Var multi_head_attention(const Var& q, const Var& k, const Var& v, std::size_t groups,
                         std::size_t heads, double dropout_p, Rng* rng, AttentionWeights* trace) {
  require_rank2(q, "multi_head_attention");
  require_same_shape(q, k, "multi_head_attention");
  require_same_shape(q, v, "multi_head_attention");
  const std::size_t rows = q.shape()[0], dim = q.shape()[1];
  if (groups == 0 || rows % groups != 0) {
    throw DimensionError("multi_head_attention: " + std::to_string(rows) + " rows not divisible into " +
                         std::to_string(groups) + " groups");
  }
  if (heads == 0 || dim % heads != 0) {
    throw DimensionError("multi_head_attention: width " + std::to_string(dim) + " not divisible by " +
                         std::to_string(heads) + " heads");
  }
  if (dropout_p < 0.0 || dropout_p >= 1.0) throw UsageError("attention dropout must lie in [0, 1)");
  if (dropout_p > 0.0 && rng == nullptr) throw UsageError("attention dropout needs a random stream");

  const std::size_t t = rows / groups, dh = dim / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  const std::size_t block = t * t;

  // probs: softmax weights; applied: after dropout (aliases probs when p == 0).
  auto probs = std::make_shared<std::vector<double>>(groups * heads * block);
  std::shared_ptr<std::vector<double>> applied = probs;
  if (dropout_p > 0.0) applied = std::make_shared<std::vector<double>>(probs->size());
  const double keep_scale = dropout_p > 0.0 ? 1.0 / (1.0 - dropout_p) : 1.0;

  const double* Q = q.value().data().data();
  const double* K = k.value().data().data();
  const double* V = v.value().data().data();
  Tensor out(Shape{rows, dim});
  std::vector<double> scores(t);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t h = 0; h < heads; ++h) {
      const std::size_t off = h * dh;
      double* P = probs->data() + (g * heads + h) * block;
      double* A = applied->data() + (g * heads + h) * block;
      for (std::size_t i = 0; i < t; ++i) {
        const double* qi = Q + (g * t + i) * dim + off;
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < t; ++j) {
          const double* kj = K + (g * t + j) * dim + off;
          double s = 0.0;
          for (std::size_t c = 0; c < dh; ++c) s += qi[c] * kj[c];
          scores[j] = s * inv_sqrt;
          mx = std::max(mx, scores[j]);
        }
        double total = 0.0;
        for (std::size_t j = 0; j < t; ++j) total += (scores[j] = std::exp(scores[j] - mx));
        for (std::size_t j = 0; j < t; ++j) {
          P[i * t + j] = scores[j] / total;
          if (dropout_p > 0.0) A[i * t + j] = rng->uniform() >= dropout_p ? P[i * t + j] * keep_scale : 0.0;
        }
        double* orow = out.data().data() + (g * t + i) * dim + off;
        for (std::size_t j = 0; j < t; ++j) {
          const double a = A[i * t + j];
          if (a == 0.0) continue;
          const double* vj = V + (g * t + j) * dim + off;
          for (std::size_t c = 0; c < dh; ++c) orow[c] += a * vj[c];
        }
      }
    }
  }
  if (trace != nullptr) {
    trace->groups = groups;
    trace->heads = heads;
    trace->tokens = t;
    trace->weights = *probs;
  }

  return make_node(
      std::move(out), "multi_head_attention", {q.node(), k.node(), v.node()},
      [groups, heads, t, dim, dh, block, inv_sqrt, dropout_p, keep_scale, probs, applied](Node& self) {
        Node& nq = parent(self, 0);
        Node& nk = parent(self, 1);
        Node& nv = parent(self, 2);
        const double* Q = nq.value.data().data();
        const double* K = nk.value.data().data();
        const double* V = nv.value.data().data();
        const double* G = self.grad.data().data();
        double* dQ = nq.grad.data().data();
        double* dK = nk.grad.data().data();
        double* dV = nv.grad.data().data();
        std::vector<double> dp(t);
        for (std::size_t g = 0; g < groups; ++g) {
          for (std::size_t h = 0; h < heads; ++h) {
            const std::size_t off = h * dh;
            const double* P = probs->data() + (g * heads + h) * block;
            const double* A = applied->data() + (g * heads + h) * block;
            for (std::size_t i = 0; i < t; ++i) {
              const double* gi = G + (g * t + i) * dim + off;
              // dV_j += A_ij * dO_i ; dA_ij = dO_i . V_j
              for (std::size_t j = 0; j < t; ++j) {
                const double* vj = V + (g * t + j) * dim + off;
                double* dvj = dV + (g * t + j) * dim + off;
                const double a = A[i * t + j];
                double s = 0.0;
                for (std::size_t c = 0; c < dh; ++c) {
                  s += gi[c] * vj[c];
                  dvj[c] += a * gi[c];
                }
                // Through dropout: dP = dA * mask, and mask = A/P where P > 0.
                if (dropout_p > 0.0) s = A[i * t + j] != 0.0 ? s * keep_scale : 0.0;
                dp[j] = s;
              }
              double dot = 0.0;
              for (std::size_t j = 0; j < t; ++j) dot += dp[j] * P[i * t + j];
              const double* qi = Q + (g * t + i) * dim + off;
              double* dqi = dQ + (g * t + i) * dim + off;
              for (std::size_t j = 0; j < t; ++j) {
                const double ds = P[i * t + j] * (dp[j] - dot) * inv_sqrt;
                if (ds == 0.0) continue;
                const double* kj = K + (g * t + j) * dim + off;
                double* dkj = dK + (g * t + j) * dim + off;
                for (std::size_t c = 0; c < dh; ++c) {
                  dqi[c] += ds * kj[c];
                  dkj[c] += ds * qi[c];
                }
              }
            }
          }
        }
      });
}

Var ghost_batch_norm(const Var& x, const Var& gain, const Var& bias, std::size_t virtual_batch,
                     double eps, std::vector<ChunkStats>* stats) {
  require_rank2(x, "ghost_batch_norm");
  if (virtual_batch == 0) throw UsageError("ghost_batch_norm: virtual batch must be >= 1");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (gain.value().size() != n || bias.value().size() != n) {
    throw DimensionError("ghost_batch_norm: gain/bias must have " + std::to_string(n) + " entries");
  }
  auto normed = std::make_shared<Tensor>(Shape{m, n});
  // inv_std per (chunk, column)
  const std::size_t chunks = (m + virtual_batch - 1) / virtual_batch;
  auto inv_std = std::make_shared<std::vector<double>>(chunks * n);
  Tensor out(Shape{m, n});
  if (stats) stats->clear();
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t r0 = c * virtual_batch, r1 = std::min(m, r0 + virtual_batch);
    const auto cnt = static_cast<double>(r1 - r0);
    ChunkStats cs{r1 - r0, std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
      double mu = 0.0;
      for (std::size_t r = r0; r < r1; ++r) mu += x.value()[r * n + j];
      mu /= cnt;
      double var = 0.0;
      for (std::size_t r = r0; r < r1; ++r) var += (x.value()[r * n + j] - mu) * (x.value()[r * n + j] - mu);
      var /= cnt;
      const double is = 1.0 / std::sqrt(var + eps);
      (*inv_std)[c * n + j] = is;
      cs.mean[j] = mu;
      cs.var[j] = var;
      for (std::size_t r = r0; r < r1; ++r) {
        const double xh = (x.value()[r * n + j] - mu) * is;
        (*normed)[r * n + j] = xh;
        out[r * n + j] = gain.value()[j] * xh + bias.value()[j];
      }
    }
    if (stats) stats->push_back(std::move(cs));
  }
  return make_node(std::move(out), "ghost_batch_norm", {x.node(), gain.node(), bias.node()},
                   [m, n, virtual_batch, chunks, normed, inv_std](Node& self) {
                     Node& nx = parent(self, 0);
                     Node& ng = parent(self, 1);
                     Node& nb = parent(self, 2);
                     for (std::size_t c = 0; c < chunks; ++c) {
                       const std::size_t r0 = c * virtual_batch, r1 = std::min(m, r0 + virtual_batch);
                       const auto cnt = static_cast<double>(r1 - r0);
                       for (std::size_t j = 0; j < n; ++j) {
                         double s1 = 0.0, s2 = 0.0;
                         for (std::size_t r = r0; r < r1; ++r) {
                           const double gy = self.grad[r * n + j];
                           const double xh = (*normed)[r * n + j];
                           ng.grad[j] += gy * xh;
                           nb.grad[j] += gy;
                           const double dxh = gy * ng.value[j];
                           s1 += dxh;
                           s2 += dxh * xh;
                         }
                         s1 /= cnt;
                         s2 /= cnt;
                         const double is = (*inv_std)[c * n + j];
                         for (std::size_t r = r0; r < r1; ++r) {
                           const double dxh = self.grad[r * n + j] * ng.value[j];
                           nx.grad[r * n + j] += is * (dxh - s1 - (*normed)[r * n + j] * s2);
                         }
                       }
                     }
                   });
}

Var batch_norm_inference(const Var& x, const Tensor& mean, const Tensor& var, const Var& gain,
                         const Var& bias, double eps) {
  require_rank2(x, "batch_norm_inference");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (mean.size() != n || var.size() != n || gain.value().size() != n || bias.value().size() != n) {
    throw DimensionError("batch_norm_inference: statistics must have " + std::to_string(n) + " entries");
  }
  auto inv_std = std::make_shared<std::vector<double>>(n);
  for (std::size_t j = 0; j < n; ++j) (*inv_std)[j] = 1.0 / std::sqrt(var[j] + eps);
  Tensor out(Shape{m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] = gain.value()[j] * (x.value()[i * n + j] - mean[j]) * (*inv_std)[j] + bias.value()[j];
  return make_node(std::move(out), "batch_norm_inference", {x.node(), gain.node(), bias.node()},
                   [m, n, mean, inv_std](Node& self) {
                     Node& nx = parent(self, 0);
                     Node& ng = parent(self, 1);
                     Node& nb = parent(self, 2);
                     for (std::size_t i = 0; i < m; ++i)
                       for (std::size_t j = 0; j < n; ++j) {
                         const double gy = self.grad[i * n + j];
                         const double xh = (nx.value[i * n + j] - mean[j]) * (*inv_std)[j];
                         ng.grad[j] += gy * xh;
                         nb.grad[j] += gy;
                         nx.grad[i * n + j] += gy * ng.value[j] * (*inv_std)[j];
                       }
                   });
}

}  // namespace pdtab::ad
