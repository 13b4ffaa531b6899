// Copyright 2026 The hecnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "hecnn/common/errors.hpp"
#include "hecnn/common/prng.hpp"
#include "hecnn/data/mnist.hpp"
#include "hecnn/nn/model.hpp"
#include "hecnn/nn/network.hpp"
#include "hecnn/nn/train.hpp"

namespace hecnn::nn {
namespace {

using Shape = std::vector<std::size_t>;

Tensor random_tensor(Shape shape, Prng& rng, double lo = -1, double hi = 1) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = lo + (hi - lo) * rng.uniform01();
  return t;
}

TEST(Network, TrainFig2ShapeTrace) {
  const auto c = NetworkConfig::preset("train-fig2", ActivationSpec::parse("relu"));
  std::vector<Shape> got;
  for (const auto& l : c.layers) {
    if (l.kind != LayerKind::kActivation) got.push_back(l.out_shape);
  }
  const std::vector<Shape> want = {{28, 28, 5}, {14, 14, 5}, {14, 14, 10}, {7, 7, 10},
                                   {128},       {10},        {10}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(c.activations().size(), 3u);
  EXPECT_TRUE(c.has_softmax());
}

TEST(Network, InferFig3DropsSecondConvActivationAndSoftmax) {
  const auto c = NetworkConfig::preset("infer-fig3", ActivationSpec::parse("relu"));
  std::vector<std::string> names;
  for (const auto& l : c.layers) names.push_back(l.name);
  EXPECT_EQ(names, (std::vector<std::string>{"conv1", "act1", "pool1", "conv2", "pool2", "fc1",
                                             "act2", "fc2"}));
  EXPECT_FALSE(c.has_softmax());
  EXPECT_EQ(c.output_shape(), Shape{10});
}

TEST(Network, RuntimeShapesMatchDeclared) {
  const auto c = NetworkConfig::preset("train-fig2", ActivationSpec::parse("sigmoid"));
  Prng rng(3);
  const auto m = Model::glorot(c, rng);
  const auto tr = forward_trace(c, m, random_tensor({28, 28, 1}, rng, 0, 1));
  for (std::size_t i = 0; i < c.layers.size(); ++i) EXPECT_EQ(tr.outputs[i].shape(), c.layers[i].out_shape);
}

TEST(Network, BadGeometryNamesLayer) {
  NetworkConfig c;
  c.name = "bad";
  c.input_shape = {7, 7, 1};
  LayerSpec pool;
  pool.kind = LayerKind::kPool;
  pool.name = "poolx";
  pool.window = 2;
  pool.stride = 2;
  c.layers = {pool};
  try {
    c.build();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("poolx"), std::string::npos);
  }
}

TEST(Network, WrongInputShapeIsAnError) {
  const auto c = NetworkConfig::preset("infer-fig3", ActivationSpec::parse("relu"));
  EXPECT_THROW(forward(c, Model::zeros(c), Tensor({27, 28, 1})), Error);
}

TEST(Activation, ParseAndPrint) {
  const auto a = ActivationSpec::parse("poly:relu:7:-10:10");
  EXPECT_EQ(a.kind, ActKind::kPoly);
  EXPECT_EQ(a.approx.degree, 7);
  EXPECT_EQ(a.to_string(), "poly:relu:7:-10:10");
  EXPECT_EQ(ActivationSpec::parse(a.to_string()).approx.mono_coeffs, a.approx.mono_coeffs);
  EXPECT_THROW(ActivationSpec::parse("tanh"), Error);
  EXPECT_THROW(ActivationSpec::parse("poly:relu:0:-1:1"), Error);
  EXPECT_THROW(ActivationSpec::parse("poly:relu:3:1:-1"), Error);
}

TEST(Forward, ZeroNetworkIsUniform) {
  const auto c = NetworkConfig::preset("train-fig2", ActivationSpec::parse("relu"));
  Prng rng(1);
  const auto out = forward(c, Model::zeros(c), random_tensor({28, 28, 1}, rng, 0, 1));
  for (double v : out.data()) EXPECT_DOUBLE_EQ(v, 0.1);
  const auto c3 = NetworkConfig::preset("infer-fig3", ActivationSpec::parse("relu"));
  const auto logits = forward(c3, Model::zeros(c3), random_tensor({28, 28, 1}, rng, 0, 1));
  for (double v : logits.data()) EXPECT_EQ(v, 0.0);
}

NetworkConfig single_conv(std::size_t window, std::size_t padding, std::size_t filters,
                          Shape input) {
  NetworkConfig c;
  c.name = "conv";
  c.input_shape = std::move(input);
  LayerSpec l;
  l.kind = LayerKind::kConv;
  l.name = "conv";
  l.window = window;
  l.padding = padding;
  l.filters = filters;
  c.layers = {l};
  c.build();
  return c;
}

TEST(Forward, ConvMatchesDirectSum) {
  Prng rng(5);
  for (std::size_t pad : {0u, 1u, 2u}) {
    const auto c = single_conv(3, pad, 2, {6, 6, 2});
    Model m = Model::zeros(c);
    // Small integers keep every sum exact in double.
    for (double& v : m.params["conv.w"].data()) v = static_cast<double>(rng.uniform_below(7)) - 3;
    for (double& v : m.params["conv.b"].data()) v = static_cast<double>(rng.uniform_below(5)) - 2;
    Tensor in({6, 6, 2});
    for (double& v : in.data()) v = static_cast<double>(rng.uniform_below(9)) - 4;
    const auto out = forward(c, m, in);
    const auto& w = m.params["conv.w"];
    const std::ptrdiff_t P = static_cast<std::ptrdiff_t>(pad);
    for (std::size_t y = 0; y < out.dim(0); ++y) {
      for (std::size_t x = 0; x < out.dim(1); ++x) {
        for (std::size_t f = 0; f < 2; ++f) {
          double want = m.params["conv.b"][f];
          for (std::ptrdiff_t i = 0; i < 3; ++i) {
            for (std::ptrdiff_t j = 0; j < 3; ++j) {
              const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y) + i - P;
              const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(x) + j - P;
              if (yy < 0 || xx < 0 || yy >= 6 || xx >= 6) continue;
              for (std::size_t ch = 0; ch < 2; ++ch) {
                want += in.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), ch) *
                        w[((static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)) * 2 + ch) * 2 + f];
              }
            }
          }
          EXPECT_EQ(out.at(y, x, f), want);
        }
      }
    }
  }
}

TEST(Forward, MeanPoolOfConstantPlaneIsConstant) {
  NetworkConfig c;
  c.name = "pool";
  c.input_shape = {4, 4, 3};
  LayerSpec l;
  l.kind = LayerKind::kPool;
  l.name = "pool";
  l.window = 2;
  l.stride = 2;
  c.layers = {l};
  c.build();
  for (double v : {0.0, 0.3, -7.25, 1e9}) {
    const auto out = forward(c, Model::zeros(c), Tensor({4, 4, 3}, v));
    for (double o : out.data()) EXPECT_EQ(o, v);
  }
}

// conv(3x3, 2 filters, same) -> act -> pool -> fc(18) -> act -> fc(3) -> softmax
NetworkConfig tiny(const ActivationSpec& act) {
  NetworkConfig c;
  c.name = "tiny";
  c.input_shape = {6, 6, 1};
  LayerSpec conv;
  conv.kind = LayerKind::kConv;
  conv.name = "conv1";
  conv.window = 3;
  conv.padding = 1;
  conv.filters = 2;
  LayerSpec a1;
  a1.kind = LayerKind::kActivation;
  a1.name = "act1";
  a1.activation = act;
  LayerSpec pool;
  pool.kind = LayerKind::kPool;
  pool.name = "pool1";
  pool.window = 2;
  pool.stride = 2;
  LayerSpec fc1;
  fc1.kind = LayerKind::kFc;
  fc1.name = "fc1";
  fc1.units = 5;
  LayerSpec a2 = a1;
  a2.name = "act2";
  LayerSpec fc2 = fc1;
  fc2.name = "fc2";
  fc2.units = 3;
  LayerSpec sm;
  sm.kind = LayerKind::kSoftmax;
  sm.name = "softmax";
  c.layers = {conv, a1, pool, fc1, a2, fc2, sm};
  c.build();
  return c;
}

double gradient_check(const ActivationSpec& act, std::uint64_t seed) {
  const auto c = tiny(act);
  Prng rng(seed);
  Model m = Model::glorot(c, rng);
  for (auto& [k, t] : m.params) {
    for (double& v : t.data()) v += 0.1 * (2 * rng.uniform01() - 1);
  }
  std::vector<Tensor> images;
  for (int i = 0; i < 3; ++i) images.push_back(random_tensor({6, 6, 1}, rng, 0, 1));
  const std::vector<int> labels = {0, 2, 1};
  Gradients g;
  backward(c, m, images, labels, g);
  double worst = 0;
  const double h = 1e-5;
  for (auto& [k, t] : m.params) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double orig = t[i];
      t[i] = orig + h;
      const double up = loss(c, m, images, labels);
      t[i] = orig - h;
      const double down = loss(c, m, images, labels);
      t[i] = orig;
      const double numeric = (up - down) / (2 * h);
      const double analytic = g.at(k)[i];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

TEST(Backward, GradientCheckSigmoid) {
  EXPECT_LE(gradient_check(ActivationSpec::parse("sigmoid"), 11), 1e-4);
}

TEST(Backward, GradientCheckPolynomial) {
  EXPECT_LE(gradient_check(ActivationSpec::parse("poly:relu:7:-10:10"), 12), 1e-4);
  EXPECT_LE(gradient_check(ActivationSpec::parse("poly:sigmoid:9:-5:5"), 13), 1e-4);
}

TEST(Backward, GradientCheckRelu) {
  EXPECT_LE(gradient_check(ActivationSpec::parse("relu"), 14), 1e-4);
}

data::Dataset synthetic(std::size_t n, std::uint64_t seed) {
  // Class k lights up row block k of a 6x6 image.
  Prng rng(seed);
  data::Dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(rng.uniform_below(3));
    Tensor t = random_tensor({6, 6, 1}, rng, 0, 0.3);
    for (std::size_t r = 2 * static_cast<std::size_t>(label); r < 2 * static_cast<std::size_t>(label) + 2; ++r) {
      for (std::size_t col = 0; col < 6; ++col) t.at(r, col, 0) += 0.7;
    }
    ds.images.push_back(t);
    ds.labels.push_back(label);
  }
  return ds;
}

TEST(Train, DeterministicAndLearnsSyntheticTask) {
  const auto c = tiny(ActivationSpec::parse("relu"));
  const auto tr = synthetic(300, 1), te = synthetic(100, 2);
  Hyperparams hp;
  hp.epochs = 5;
  hp.batch_size = 16;
  hp.learning_rate = 0.05;
  const auto a = train(c, tr, te, hp, 9);
  const auto b = train(c, tr, te, hp, 9);
  EXPECT_EQ(a.model.serialize(), b.model.serialize());
  ASSERT_EQ(a.curve.size(), 5u);
  EXPECT_LT(a.curve.back().loss, a.curve.front().loss);
  EXPECT_GE(a.model.meta.accuracy, 0.9);
  EXPECT_EQ(a.model.meta.accuracy, accuracy(c, a.model, te));
}

TEST(Train, ThreadedTrainingIsReproducible) {
  const auto c = tiny(ActivationSpec::parse("sigmoid"));
  const auto tr = synthetic(100, 3);
  Hyperparams hp;
  hp.epochs = 2;
  hp.threads = 3;
  EXPECT_EQ(train(c, tr, {}, hp, 1).model.serialize(), train(c, tr, {}, hp, 1).model.serialize());
}

TEST(Train, DivergenceSuggestsSmallerLearningRate) {
  const auto c = tiny(ActivationSpec::parse("poly:relu:7:-10:10"));
  Hyperparams hp;
  hp.epochs = 3;
  hp.learning_rate = 1e4;
  try {
    train(c, synthetic(200, 4), {}, hp, 1);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("smaller learning rate"), std::string::npos);
  }
}

TEST(Train, ZeroEpochsIsChanceLevel) {
  const auto c = tiny(ActivationSpec::parse("relu"));
  Hyperparams hp;
  hp.epochs = 0;
  const auto r = train(c, synthetic(10, 5), synthetic(3000, 6), hp, 2);
  EXPECT_TRUE(r.curve.empty());
  EXPECT_NEAR(r.model.meta.accuracy, 1.0 / 3, 0.15);
}

NetworkConfig flat_fc(std::size_t pixels) {
  NetworkConfig c;
  c.name = "fc";
  c.input_shape = {1, pixels, 1};
  LayerSpec fc;
  fc.kind = LayerKind::kFc;
  fc.name = "fc";
  fc.units = 10;
  c.layers = {fc};
  c.build();
  return c;
}

TEST(Accuracy, ConstantClassIsChance) {
  const auto c = flat_fc(4);
  Model m = Model::zeros(c);
  m.params["fc.b"][0] = 1;
  data::Dataset ds;
  for (int i = 0; i < 1000; ++i) {
    ds.images.emplace_back(Shape{1, 4, 1}, 0.5);
    ds.labels.push_back(i % 10);
  }
  EXPECT_DOUBLE_EQ(accuracy(c, m, ds), 0.1);
}

TEST(Accuracy, PerfectLookupIsOne) {
  const auto c = flat_fc(10);
  Model m = Model::zeros(c);
  data::Dataset ds;
  for (int k = 0; k < 10; ++k) {
    Tensor t({1, 10, 1});
    t[static_cast<std::size_t>(k)] = 1;
    ds.images.push_back(t);
    ds.labels.push_back((k * 7) % 10);
    m.params["fc.w"][static_cast<std::size_t>((k * 7) % 10) * 10 + static_cast<std::size_t>(k)] = 1;
  }
  EXPECT_EQ(accuracy(c, m, ds, 2), 1.0);
}

TEST(ModelFile, ByteExactRoundTrip) {
  const auto c = NetworkConfig::preset("infer-fig3", ActivationSpec::parse("poly:relu:7:-10:10"));
  Prng rng(4);
  Model m = Model::glorot(c, rng);
  m.meta.seed = 0x123456789abcdefULL;
  m.meta.epochs = 10;
  m.meta.accuracy = 0.9731;
  const auto bytes = m.serialize();
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "BFNN");
  const auto back = Model::deserialize(bytes);
  EXPECT_EQ(back.serialize(), bytes);
  EXPECT_EQ(back.meta.seed, m.meta.seed);
  EXPECT_EQ(back.meta.activation, "poly:relu:7:-10:10");
  EXPECT_EQ(back.meta.network, "infer-fig3");
  EXPECT_NO_THROW(back.check(c));
  auto cut = bytes;
  cut.resize(cut.size() - 3);
  EXPECT_THROW(Model::deserialize(cut), Error);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(Model::deserialize(bad), Error);
}

TEST(ModelFile, CheckNamesMismatchedTensor) {
  const auto c = NetworkConfig::preset("infer-fig3", ActivationSpec::parse("relu"));
  Model m = Model::zeros(c);
  m.params["fc1.w"] = Tensor({128, 491});
  try {
    m.check(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("fc1.w"), std::string::npos);
  }
}

TEST(TrainMnist, SmallRunBeatsChanceByFar) {
  const auto dir = data::default_mnist_dir();
  if (!data::mnist_available(dir)) GTEST_SKIP() << "MNIST files not present";
  const auto all = data::load_mnist_train(dir);
  auto [tr, te] = data::split(all, 2000, 500, 1);
  const auto c = NetworkConfig::preset("infer-fig3", ActivationSpec::parse("relu"));
  Hyperparams hp;
  hp.epochs = 4;
  const auto r = train(c, tr, te, hp, 1);
  EXPECT_GE(r.model.meta.accuracy, 0.75);
}

}  // namespace
}  // namespace hecnn::nn
