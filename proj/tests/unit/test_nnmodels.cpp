#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "pdtab/autodiff/gradcheck.hpp"
#include "pdtab/dataio/csv.hpp"
#include "pdtab/dataio/split.hpp"
#include "pdtab/dataio/standardize.hpp"
#include "pdtab/errors.hpp"
#include "pdtab/nnmodels/attentive.hpp"
#include "pdtab/nnmodels/checkpoint.hpp"
#include "pdtab/nnmodels/mlp.hpp"
#include "pdtab/nnmodels/saint.hpp"
#include "pdtab/nnmodels/train.hpp"
#include "surrogate.hpp"

using namespace pdtab;
using namespace pdtab::nn;
using pdtab::testing::max_abs_diff;
using pdtab::testing::random_tensor;

namespace {

ad::Var& param(NeuralModel& model, const std::string& name) {
  for (auto& p : model.parameters())
    if (p.name == name) return p.var;
  FAIL("no parameter " << name);
  throw std::logic_error("unreachable");
}

ad::Tensor row_of(const ad::Tensor& x, std::size_t r) {
  ad::Tensor out(ad::Shape{1, x.cols()});
  for (std::size_t c = 0; c < x.cols(); ++c) out.at(0, c) = x.at(r, c);
  return out;
}

data::Split surrogate_split() {
  std::istringstream in(pdtab::testing::surrogate_parkinsons_csv());
  const auto full = data::read_csv(in, data::RecordSchema::uci_parkinsons(), "surrogate.csv");
  auto split = data::stratified_split(full, data::SplitSpec{});
  const auto stats = data::standardize_fit(split.train);
  return {data::standardize_apply(split.train, stats), data::standardize_apply(split.test, stats)};
}

data::Dataset toy_separable() {
  Rng rng(51);
  ad::Tensor x(ad::Shape{20, 2});
  std::vector<int> y(20);
  for (std::size_t i = 0; i < 20; ++i) {
    y[i] = i % 2 == 0 ? 1 : 0;
    const double side = y[i] == 1 ? 1.0 : -1.0;
    x.at(i, 0) = side * rng.uniform(0.5, 2.0);
    x.at(i, 1) = rng.uniform(-1.0, 1.0);
  }
  return data::make_dataset({"a", "b"}, x, y);
}

SaintConfig small_saint(bool intersample) {
  return SaintConfig{.embed_dim = 8, .n_layers = 2, .n_heads = 2, .ff_multiplier = 2, .dropout = 0.1,
                     .use_intersample = intersample};
}

}  // namespace

TEST_CASE("model kind names") {
  CHECK(to_string(ModelKind::kSaint) == "saint");
  CHECK(parse_model_kind("attentive") == ModelKind::kAttentive);
  CHECK_THROWS_AS(parse_model_kind("gbm"), ConfigError);
  CHECK(kind_of(ModelConfig{SaintConfig{}}) == ModelKind::kSaint);
}

TEST_CASE("config validation and strict json") {
  CHECK_THROWS_AS((MlpConfig{.hidden_sizes = {8, 0}}).validate(), ConfigError);
  CHECK_THROWS_AS((AttentiveConfig{.virtual_batch = 0}).validate(), ConfigError);
  CHECK_THROWS_AS((SaintConfig{.embed_dim = 15}).validate(), ConfigError);
  CHECK_THROWS_AS((SaintConfig{.dropout = 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS((TrainConfig{.epochs = 0}).validate(), ConfigError);

  const auto j = model_config_json(SaintConfig{.embed_dim = 8, .dropout = 0.0});
  const auto back = std::get<SaintConfig>(model_config_from_json(ModelKind::kSaint, j));
  CHECK(back.embed_dim == 8);
  CHECK(back.dropout == 0.0);
  CHECK(back.n_heads == 2);

  nlohmann::ordered_json bad = j;
  bad["heads"] = 4;
  CHECK_THROWS_AS(model_config_from_json(ModelKind::kSaint, bad), ConfigError);
  bad = j;
  bad["embed_dim"] = "sixteen";
  CHECK_THROWS_AS(model_config_from_json(ModelKind::kSaint, bad), ConfigError);
}

TEST_CASE("parameter names are unique and initialisation follows fan-in") {
  Rng rng(52);
  for (const ModelConfig& cfg : {ModelConfig{MlpConfig{}}, ModelConfig{AttentiveConfig{}}, ModelConfig{SaintConfig{}}}) {
    Rng init(53);
    const auto model = make_model(cfg, 22, init);
    std::set<std::string> names;
    for (const auto& p : model->parameters()) {
      CHECK(names.insert(p.name).second);
      CHECK(p.var.grad().shape() == p.var.value().shape());
    }
  }
  Rng init(54);
  MlpModel mlp(MlpConfig{}, 22, init);
  const double bound = std::sqrt(1.0 / 22.0);
  for (const double w : param(mlp, "mlp.layer0.W").value().data()) CHECK(std::abs(w) <= bound);
  for (const double b : param(mlp, "mlp.layer0.b").value().data()) CHECK(b == 0.0);
  CHECK(param(mlp, "mlp.layer1.W").value().shape() == ad::Shape{64, 32});
  CHECK(param(mlp, "mlp.output.W").value().shape() == ad::Shape{32, 1});
}

TEST_CASE("mlp forward") {
  Rng init(55);
  SUBCASE("zero weights give one half") {
    MlpModel mlp(MlpConfig{}, 22, init);
    for (auto& p : mlp.parameters()) p.var.mutable_value().fill(0.0);
    for (const double v : predict_proba(mlp, random_tensor({5, 22}, init))) CHECK(v == 0.5);
  }
  SUBCASE("hand-set two-feature model") {
    MlpModel mlp(MlpConfig{.hidden_sizes = {1}}, 2, init);
    param(mlp, "mlp.layer0.W").mutable_value() = ad::Tensor::matrix({{0.5}, {-1.0}});
    param(mlp, "mlp.layer0.b").mutable_value() = ad::Tensor::vector({0.25});
    param(mlp, "mlp.output.W").mutable_value() = ad::Tensor::matrix({{2.0}});
    param(mlp, "mlp.output.b").mutable_value() = ad::Tensor::vector({-0.5});
    const auto p = predict_proba(mlp, ad::Tensor::matrix({{1.0, 0.2}, {-1.0, 1.0}}));
    // h = relu(0.5 - 0.2 + 0.25) = 0.55, logit = 2 * 0.55 - 0.5 = 0.6; second row's h clamps to 0.
    CHECK(std::abs(p[0] - 1.0 / (1.0 + std::exp(-0.6))) <= 1e-12);
    CHECK(std::abs(p[1] - 1.0 / (1.0 + std::exp(0.5))) <= 1e-12);
  }
  SUBCASE("duplicate rows and row independence") {
    MlpModel mlp(MlpConfig{}, 22, init);
    ad::Tensor x = random_tensor({6, 22}, init);
    for (std::size_t c = 0; c < 22; ++c) x.at(3, c) = x.at(1, c);
    const auto batch = predict_proba(mlp, x);
    CHECK(batch[1] == batch[3]);
    for (std::size_t r = 0; r < 6; ++r) CHECK(std::abs(predict_proba(mlp, row_of(x, r))[0] - batch[r]) <= 1e-10);
    CHECK_THROWS_AS(predict_proba(mlp, random_tensor({2, 21}, init)), DimensionError);
  }
}

TEST_CASE("attentive forward") {
  Rng init(56);
  AttentiveModel model(AttentiveConfig{}, 22, init);
  const ad::Tensor x = random_tensor({9, 22}, init, -2, 2);

  ForwardTrace trace;
  const auto batch = predict_proba(model, x, &trace);
  REQUIRE(trace.feature_mask.shape() == ad::Shape{9, 22});
  for (std::size_t r = 0; r < 9; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < 22; ++c) total += trace.feature_mask.at(r, c);
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
  for (const double p : batch) CHECK((p > 0.0 && p < 1.0));
  for (std::size_t r = 0; r < 9; ++r) CHECK(std::abs(predict_proba(model, row_of(x, r))[0] - batch[r]) <= 1e-10);

  const ad::Tensor mask = model.mask(ad::constant(x)).value();
  CHECK(mask == trace.feature_mask);
  const ad::Tensor masked = ad::mul(ad::constant(mask), ad::constant(x)).value();
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(masked[i] - mask[i] * x[i]) <= 1e-12);

  param(model, "attentive.mask.W").mutable_value().fill(0.0);
  const ad::Tensor uniform = model.mask(ad::constant(x)).value();
  for (const double m : uniform.data()) CHECK(std::abs(m - 1.0 / 22.0) <= 1e-15);
}

TEST_CASE("attentive running statistics follow the configured momentum") {
  Rng init(57);
  AttentiveModel model(AttentiveConfig{.head_hidden = 3, .virtual_batch = 4, .bn_momentum = 0.25}, 5, init);
  const auto before = model.buffers();
  REQUIRE(before.size() == 2);
  CHECK(before[0].value == ad::Tensor(ad::Shape{3}, 0.0));
  CHECK(before[1].value == ad::Tensor(ad::Shape{3}, 1.0));
  ad::ChunkStats s{4, {1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}};
  model.absorb_batch_stats({s});
  const auto after = model.buffers();
  CHECK(after[0].value[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(after[1].value[0] == doctest::Approx(0.75 + 1.25).epsilon(1e-15));
}

TEST_CASE("saint embedding") {
  Rng init(58);
  SaintModel model(SaintConfig{}, 22, init);
  const ad::Tensor zero(ad::Shape{3, 22});
  const ad::Tensor e = model.embed(ad::constant(zero)).value();
  CHECK(e.shape() == ad::Shape{66, 16});
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t f = 0; f < 22; ++f)
      for (std::size_t k = 0; k < 16; ++k) CHECK(e.at(r * 22 + f, k) == model.embed_bias().value().at(f, k));

  ad::Tensor x = random_tensor({3, 22}, init);
  ad::Tensor doubled = x;
  doubled.at(1, 5) *= 2.0;
  const ad::Tensor a = model.embed(ad::constant(x)).value();
  const ad::Tensor b = model.embed(ad::constant(doubled)).value();
  for (std::size_t t = 0; t < 66; ++t)
    for (std::size_t k = 0; k < 16; ++k) {
      if (t == 1 * 22 + 5) continue;
      CHECK(a.at(t, k) == b.at(t, k));
    }
  CHECK(a.at(27, 0) != b.at(27, 0));
  CHECK(model.embed(ad::constant(random_tensor({7, 22}, init))).value().shape() == ad::Shape{154, 16});
}

TEST_CASE("saint self-attention block") {
  Rng init(59);
  SaintModel model(SaintConfig{}, 22, init);
  const ad::Var tokens = model.embed(ad::constant(random_tensor({4, 22}, init)));
  ForwardContext ctx;
  ad::AttentionWeights trace;
  const ad::Var out = model.self_attention_block(tokens, 0, ctx, &trace);
  CHECK(out.shape() == tokens.shape());
  CHECK(trace.groups == 4);
  CHECK(trace.tokens == 22);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 2; ++h)
      for (std::size_t i = 0; i < 22; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < 22; ++j) total += trace.at(g, h, i, j);
        CHECK(std::abs(total - 1.0) <= 1e-9);
      }

  SUBCASE("zeroed value projection leaves the feed-forward-of-norm path") {
    const AttentionBlock& p = model.self_block(0);
    ad::Var vw = p.value.weight, vb = p.value.bias;
    vw.mutable_value().fill(0.0);
    vb.mutable_value().fill(0.0);
    const ad::Tensor got = model.self_attention_block(tokens, 0, ctx).value();
    const ad::Var z = ad::layer_norm(ad::add(tokens, p.out(ad::constant(ad::Tensor(tokens.shape())))), p.norm1_gain,
                                     p.norm1_shift);
    const ad::Var expected =
        ad::layer_norm(ad::add(z, p.ff_out(ad::relu(p.ff_in(z)))), p.norm2_gain, p.norm2_shift);
    CHECK(max_abs_diff(got, expected.value()) <= 1e-12);
  }
}

TEST_CASE("saint intersample block") {
  Rng init(60);
  SaintModel model(SaintConfig{}, 22, init);
  ForwardContext ctx;

  SUBCASE("single sample attends to itself") {
    const ad::Var tokens = model.embed(ad::constant(random_tensor({1, 22}, init)));
    ad::AttentionWeights trace;
    const ad::Tensor got = model.intersample_attention_block(tokens, 0, ctx, &trace).value();
    CHECK(trace.tokens == 1);
    CHECK(trace.at(0, 0, 0, 0) == 1.0);
    CHECK(trace.at(0, 1, 0, 0) == 1.0);
    const AttentionBlock& p = model.intersample_block(0);
    const ad::Var z = ad::layer_norm(ad::add(tokens, p.out(p.value(tokens))), p.norm1_gain, p.norm1_shift);
    const ad::Var expected = ad::layer_norm(ad::add(z, p.ff_out(ad::relu(p.ff_in(z)))), p.norm2_gain, p.norm2_shift);
    CHECK(max_abs_diff(got, expected.value()) <= 1e-12);
  }
  SUBCASE("permutation equivariance") {
    const ad::Tensor x = random_tensor({6, 22}, init, -2, 2);
    const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    ad::Tensor px(x.shape());
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t c = 0; c < 22; ++c) px.at(r, c) = x.at(perm[r], c);
    ad::AttentionWeights trace;
    const ad::Tensor a = model.intersample_attention_block(model.embed(ad::constant(x)), 0, ctx, &trace).value();
    const ad::Tensor b = model.intersample_attention_block(model.embed(ad::constant(px)), 0, ctx).value();
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t t = 0; t < 22 * 16; ++t) CHECK(std::abs(b[r * 22 * 16 + t] - a[perm[r] * 22 * 16 + t]) <= 1e-10);
    for (std::size_t h = 0; h < 2; ++h)
      for (std::size_t i = 0; i < 6; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < 6; ++j) total += trace.at(0, h, i, j);
        CHECK(std::abs(total - 1.0) <= 1e-9);
      }
    const auto full = predict_proba(model, x);
    const auto permuted = predict_proba(model, px);
    for (std::size_t r = 0; r < 6; ++r) CHECK(std::abs(permuted[r] - full[perm[r]]) <= 1e-10);
  }
}

TEST_CASE("saint forward") {
  Rng init(61);
  const ad::Tensor x = random_tensor({7, 22}, init, -2, 2);
  SUBCASE("shape and range") {
    SaintModel model(SaintConfig{}, 22, init);
    const auto p = predict_proba(model, x);
    CHECK(p.size() == 7);
    for (const double v : p) CHECK((v > 0.0 && v < 1.0));
    CHECK(predict_proba(model, x) == p);
  }
  SUBCASE("without intersample attention rows are independent") {
    SaintModel model(SaintConfig{.use_intersample = false}, 22, init);
    const auto batch = predict_proba(model, x);
    for (std::size_t r = 0; r < 7; ++r) CHECK(std::abs(predict_proba(model, row_of(x, r))[0] - batch[r]) <= 1e-10);
  }
  SUBCASE("duplicating the batch preserves intersample outputs") {
    SaintModel model(SaintConfig{}, 22, init);
    ad::Tensor twice(ad::Shape{14, 22});
    for (std::size_t i = 0; i < x.size(); ++i) twice[i] = twice[i + x.size()] = x[i];
    const auto once = predict_proba(model, x);
    const auto doubled = predict_proba(model, twice);
    for (std::size_t r = 0; r < 7; ++r) CHECK(std::abs(doubled[r] - once[r]) <= 1e-6);
  }
  SUBCASE("traces cover every layer") {
    SaintModel model(SaintConfig{}, 22, init);
    ForwardTrace trace;
    (void)predict_proba(model, x, &trace);
    CHECK(trace.self_attention.size() == 2);
    CHECK(trace.intersample.size() == 2);
  }
  SUBCASE("training mode needs a dropout stream") {
    SaintModel model(SaintConfig{}, 22, init);
    ForwardContext ctx{Mode::kTrain, nullptr, nullptr, {}};
    CHECK_THROWS_AS(model.forward(ad::constant(x), ctx), UsageError);
  }
}

TEST_CASE("full-model gradient checks") {
  Rng data_rng(62);
  const ad::Tensor x = random_tensor({8, 22}, data_rng, -2, 2);
  const ad::Tensor y = ad::Tensor::vector({1, 0, 1, 1, 0, 1, 0, 0});
  for (const ModelConfig& cfg :
       {ModelConfig{MlpConfig{}}, ModelConfig{AttentiveConfig{}}, ModelConfig{SaintConfig{.embed_dim = 8}}}) {
    Rng init(63);
    const auto model = make_model(cfg, 22, init);
    CAPTURE(to_string(model->kind()));
    const auto loss = [&] {
      Rng dropout(64);
      ForwardContext ctx{Mode::kTrain, &dropout, nullptr, {}};
      return ad::binary_cross_entropy(model->forward(ad::constant(x), ctx), y);
    };
    const auto r = ad::gradient_check(loss, model->parameters(), ad::GradCheckOptions{.samples = 60});
    CHECK(r.coordinates == 60);
    CHECK(r.max_relative_error < 1e-3);
  }
}

TEST_CASE("training on a separable toy set") {
  const auto toy = toy_separable();
  for (const ModelConfig& cfg : {ModelConfig{MlpConfig{}}, ModelConfig{AttentiveConfig{}}, ModelConfig{small_saint(true)}}) {
    const TrainConfig tc{.epochs = 200, .batch_size = 256, .learning_rate = 1e-2, .seed = 7};
    const auto trained = train(cfg, tc, toy);
    CAPTURE(to_string(trained.kind));
    CHECK(trained.loss_curve.size() == 200);
    const auto p = predict_proba(trained, toy.x);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 20; ++i) correct += (p[i] >= 0.5 ? 1 : 0) == toy.y[i];
    CHECK(correct == 20);
  }
}

TEST_CASE("training on the surrogate train fold") {
  const auto split = surrogate_split();
  for (const ModelConfig& cfg : {ModelConfig{MlpConfig{}}, ModelConfig{AttentiveConfig{}}, ModelConfig{SaintConfig{}}}) {
    const TrainConfig tc{.epochs = 12};
    const auto a = train(cfg, tc, split.train);
    CAPTURE(to_string(a.kind));
    CHECK(std::abs(a.loss_curve.front() - std::numbers::ln2) <= 0.15);
    CHECK(a.loss_curve.back() <= a.loss_curve.front());
    const auto b = train(cfg, tc, split.train);
    CHECK(a.loss_curve == b.loss_curve);
    const auto p = predict_proba(a, split.test.x);
    CHECK(p == predict_proba(b, split.test.x));
    for (const double v : p) CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("divergence is reported with its epoch") {
  auto toy = toy_separable();
  toy.x.at(3, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)train(MlpConfig{}, TrainConfig{.epochs = 3}, toy);
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    CHECK(e.epoch() == 1);
  }
  auto single = toy_separable();
  std::fill(single.y.begin(), single.y.end(), 1);
  CHECK_THROWS_AS(train(MlpConfig{}, TrainConfig{.epochs = 1}, single), DataError);
}

TEST_CASE("neural checkpoints round-trip bit-exactly") {
  const auto toy = toy_separable();
  const data::StandardizationStats stats{{0.125, -3.0}, {1.0 / 3.0, 2.0}};
  for (const ModelConfig& cfg : {ModelConfig{MlpConfig{}}, ModelConfig{AttentiveConfig{.virtual_batch = 8}},
                                 ModelConfig{small_saint(true)}}) {
    const auto trained = train(cfg, TrainConfig{.epochs = 5}, toy);
    const auto j = checkpoint_json(trained, stats, toy.feature_names);
    CHECK(j.at("format") == kCheckpointFormat);
    const auto loaded = neural_checkpoint_from_json(nlohmann::ordered_json::parse(j.dump()));
    CHECK(loaded.model.kind == trained.kind);
    CHECK(loaded.stats.mean == stats.mean);
    CHECK(loaded.stats.std == stats.std);
    CHECK(loaded.feature_names == toy.feature_names);
    CHECK(loaded.model.loss_curve == trained.loss_curve);
    CHECK(predict_proba(loaded.model, toy.x) == predict_proba(trained, toy.x));

    auto broken = j;
    broken["version"] = kCheckpointVersion + 1;
    CHECK_THROWS_AS(neural_checkpoint_from_json(broken), CheckpointError);
    broken = j;
    broken["parameters"][0]["shape"] = {1, 1};
    CHECK_THROWS_AS(neural_checkpoint_from_json(broken), CheckpointError);
  }
}
