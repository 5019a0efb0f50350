#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pdtab/boosting/checkpoint.hpp"
#include "pdtab/boosting/gbm.hpp"
#include "pdtab/boosting/tree.hpp"
#include "pdtab/dataio/csv.hpp"
#include "pdtab/dataio/split.hpp"
#include "pdtab/dataio/standardize.hpp"
#include "pdtab/errors.hpp"
#include "oracles.hpp"
#include "surrogate.hpp"

using namespace pdtab;
using namespace pdtab::boost;
using pdtab::testing::brute_force_split;

namespace {

data::Dataset make_data(const ad::Tensor& x, std::vector<int> y) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < x.cols(); ++c) names.push_back("f" + std::to_string(c));
  return data::make_dataset(names, x, std::move(y));
}

data::Dataset surrogate_train() {
  std::istringstream in(pdtab::testing::surrogate_parkinsons_csv());
  const auto full = data::read_csv(in, data::RecordSchema::uci_parkinsons(), "surrogate.csv");
  const auto split = data::stratified_split(full, data::SplitSpec{});
  return data::standardize_apply(split.train, data::standardize_fit(split.train));
}

void check_structure(const RegressionTree& tree) {
  const auto& nodes = tree.nodes();
  for (const auto& n : nodes) {
    if (n.is_leaf()) continue;
    CHECK(n.left > 0);
    CHECK(n.right > 0);
    CHECK(static_cast<std::size_t>(n.left) < nodes.size());
    CHECK(static_cast<std::size_t>(n.right) < nodes.size());
  }
  CHECK(tree.depth() <= tree.max_depth());
}

}  // namespace

TEST_CASE("constant residuals give a single leaf") {
  const ad::Tensor x = ad::Tensor::matrix({{1}, {2}, {3}, {4}});
  const std::vector<double> r(4, 0.625);
  const auto tree = fit_tree(x, r, TreeConfig{});
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.nodes()[0].value == 0.625);
}

TEST_CASE("two points split at the midpoint") {
  const ad::Tensor x = ad::Tensor::matrix({{0}, {1}});
  const std::vector<double> r{0, 1};
  const auto tree = fit_tree(x, r, TreeConfig{.max_depth = 1, .min_samples_leaf = 1});
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == 0.5);
  const std::vector<double> lo{0.2}, hi{0.9};
  CHECK(tree.predict(lo) == 0.0);
  CHECK(tree.predict(hi) == 1.0);
}

TEST_CASE("tie-breaking prefers the lower feature and then the lower threshold") {
  // Columns 0 and 1 are identical, so every split ties across features.
  const ad::Tensor x = ad::Tensor::matrix({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  const std::vector<double> r{0, 1, 0, 1};
  const auto tree = fit_tree(x, r, TreeConfig{.max_depth = 1, .min_samples_leaf = 1});
  CHECK(tree.nodes()[0].feature == 0);
  // Midpoints 0.5 and 2.5 both leave SSE 2/3; 1.5 leaves 1.0.
  CHECK(tree.nodes()[0].threshold == 0.5);
}

TEST_CASE("greedy root split matches brute force on random 8-point datasets") {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    ad::Tensor x(ad::Shape{8, 3});
    for (double& v : x.data()) v = std::round(rng.uniform(0, 10));
    std::vector<double> r(8);
    for (double& v : r) v = rng.normal();
    const std::size_t min_leaf = 1 + rng.below(2);
    const auto expected = brute_force_split(x, r, min_leaf);
    const auto tree = fit_tree(x, r, TreeConfig{.max_depth = 1, .min_samples_leaf = min_leaf});
    CAPTURE(trial);
    if (expected.feature < 0) {
      CHECK(tree.nodes().size() == 1);
      continue;
    }
    REQUIRE(tree.nodes().size() == 3);
    CHECK(tree.nodes()[0].feature == expected.feature);
    CHECK(tree.nodes()[0].threshold == expected.threshold);
    double sse = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double p = tree.predict(std::span<const double>(x.data().subspan(i * 3, 3)));
      sse += (r[i] - p) * (r[i] - p);
    }
    CHECK(std::abs(sse - expected.sse) <= 1e-9);
  }
}

TEST_CASE("tree structure and leaf partition") {
  Rng rng(42);
  const ad::Tensor x = pdtab::testing::random_tensor({60, 4}, rng);
  std::vector<double> r(60);
  for (double& v : r) v = rng.normal();
  for (const int depth : {1, 2, 3, 5}) {
    const auto tree = fit_tree(x, r, TreeConfig{.max_depth = depth, .min_samples_leaf = 2});
    check_structure(tree);
    std::vector<std::size_t> leaf_rows(tree.nodes().size(), 0);
    for (std::size_t i = 0; i < 60; ++i) {
      const auto row = std::span<const double>(x.data().subspan(i * 4, 4));
      const auto leaf = tree.leaf_index(row);
      REQUIRE(tree.nodes()[leaf].is_leaf());
      CHECK(tree.predict(row) == tree.nodes()[leaf].value);
      ++leaf_rows[leaf];
    }
    for (std::size_t k = 0; k < leaf_rows.size(); ++k)
      if (tree.nodes()[k].is_leaf()) CHECK(leaf_rows[k] >= 2);
  }
}

TEST_CASE("gbm with constant labels") {
  const auto d = make_data(ad::Tensor::matrix({{1}, {2}, {3}}), {1, 1, 1});
  const auto model = gbm_fit(d, GbmConfig{.n_stages = 5});
  CHECK(model.initial_prediction == 1.0);
  CHECK(model.trees.size() == 5);
  for (const auto& t : model.trees) {
    REQUIRE(t.nodes().size() == 1);
    CHECK(t.nodes()[0].value == 0.0);
  }
  CHECK(model.stage_mse.front() == 0.0);
}

TEST_CASE("memorisation with eta 1 and unlimited depth") {
  Rng rng(43);
  const ad::Tensor x = pdtab::testing::random_tensor({10, 3}, rng);
  const auto d = make_data(x, {1, 0, 0, 1, 1, 0, 1, 0, 1, 1});
  const auto model = gbm_fit(
      d, GbmConfig{.n_stages = 1, .learning_rate = 1.0, .max_depth = kUnlimitedDepth, .min_samples_leaf = 1});
  CHECK(model.stage_mse.back() == 0.0);
  const auto p = gbm_predict_proba(model, x);
  for (std::size_t i = 0; i < 10; ++i) CHECK(p[i] == static_cast<double>(d.y[i]));
}

TEST_CASE("stagewise training MSE never increases on the surrogate train fold") {
  const auto train = surrogate_train();
  const auto model = gbm_fit(train, GbmConfig{});
  REQUIRE(model.stage_mse.size() == 101);
  REQUIRE(model.trees.size() == 100);
  for (std::size_t m = 1; m < model.stage_mse.size(); ++m) CHECK(model.stage_mse[m] <= model.stage_mse[m - 1]);
  for (const auto& t : model.trees) check_structure(t);
  const auto again = gbm_fit(train, GbmConfig{});
  CHECK(again.stage_mse == model.stage_mse);
}

TEST_CASE("prediction clamps and sums stages") {
  GbmModel model;
  model.initial_prediction = 1.3;
  model.n_features = 1;
  model.config.n_stages = 1;
  model.trees.push_back(RegressionTree::constant(0.0));
  const ad::Tensor x = ad::Tensor::matrix({{0.0}});
  CHECK(gbm_predict_raw(model, x)[0] == 1.3);
  CHECK(gbm_predict_proba(model, x)[0] == 1.0);
  model.initial_prediction = 0.7;
  model.trees[0] = RegressionTree::constant(-10.0);
  CHECK(gbm_predict_proba(model, x)[0] == 0.0);

  model.initial_prediction = 0.65;
  model.trees.assign(3, RegressionTree::constant(0.0));
  CHECK(gbm_predict_proba(model, ad::Tensor::matrix({{1}, {2}}))[1] == 0.65);
  CHECK_THROWS_AS(gbm_predict_raw(model, ad::Tensor::matrix({{1, 2}})), DimensionError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(GbmConfig{}.validate());
  CHECK_THROWS_AS(GbmConfig{.n_stages = 0}.validate(), ConfigError);
  CHECK_THROWS_AS(GbmConfig{.learning_rate = 0.0}.validate(), ConfigError);
  CHECK_THROWS_AS(GbmConfig{.learning_rate = 1.5}.validate(), ConfigError);
  CHECK_THROWS_AS(GbmConfig{.max_depth = -1}.validate(), ConfigError);
  CHECK_THROWS_AS(GbmConfig{.min_samples_leaf = 0}.validate(), ConfigError);
}

TEST_CASE("checkpoint round trip is bit-exact") {
  const auto train = surrogate_train();
  const auto model = gbm_fit(train, GbmConfig{.n_stages = 20});
  const data::StandardizationStats stats{std::vector<double>(22, 0.1), std::vector<double>(22, 1.0 / 3.0)};
  const auto j = gbm_checkpoint_json(model, stats, train.feature_names);
  const auto text = j.dump();
  const auto loaded = gbm_checkpoint_from_json(nlohmann::ordered_json::parse(text));
  CHECK(loaded.feature_names == train.feature_names);
  CHECK(loaded.stats.std == stats.std);
  CHECK(loaded.model.stage_mse == model.stage_mse);
  CHECK(gbm_predict_raw(loaded.model, train.x) == gbm_predict_raw(model, train.x));

  auto broken = j;
  broken["version"] = 99;
  CHECK_THROWS_AS(gbm_checkpoint_from_json(broken), CheckpointError);
  broken = j;
  broken["format"] = "other";
  CHECK_THROWS_AS(gbm_checkpoint_from_json(broken), CheckpointError);
}
