#include <benchmark/benchmark.h>

#include <vector>

#include "pdtab/autodiff/ops.hpp"
#include "pdtab/boosting/tree.hpp"
#include "pdtab/nnmodels/saint.hpp"
#include "pdtab/nnmodels/train.hpp"
#include "pdtab/random.hpp"

using namespace pdtab;

namespace {

ad::Tensor random_tensor(ad::Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  ad::Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.normal();
  return t;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = ad::constant(random_tensor(ad::Shape{n, n}, 1));
  const auto b = ad::constant(random_tensor(ad::Shape{n, n}, 2));
  for (auto _ : state) benchmark::DoNotOptimize(ad::matmul(a, b).value().data().data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_AttentionBackward(benchmark::State& state) {
  const auto groups = static_cast<std::size_t>(state.range(0));
  const std::size_t tokens = 22, width = 16;
  for (auto _ : state) {
    const auto q = ad::Var(random_tensor(ad::Shape{groups * tokens, width}, 3));
    const auto loss = ad::sum(ad::multi_head_attention(q, q, q, groups, 2));
    ad::backward(loss);
    benchmark::DoNotOptimize(q.grad().data().data());
  }
}
BENCHMARK(BM_AttentionBackward)->Arg(16)->Arg(156);

void BM_SaintForward(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  Rng init(4);
  const nn::SaintModel model(nn::SaintConfig{}, 22, init);
  const auto x = random_tensor(ad::Shape{rows, 22}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(nn::predict_proba(model, x));
}
BENCHMARK(BM_SaintForward)->Arg(39)->Arg(156);

void BM_FitTree(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto x = random_tensor(ad::Shape{rows, 22}, 6);
  Rng rng(7);
  std::vector<double> r(rows);
  for (double& v : r) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(boost::fit_tree(x, r, boost::TreeConfig{}));
}
BENCHMARK(BM_FitTree)->Arg(156)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
