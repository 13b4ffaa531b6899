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
#include "hecnn/encoding/fixed_point.hpp"
#include "hecnn/encoding/quantize.hpp"
#include "hecnn/nn/train.hpp"
#include "hecnn/she/params.hpp"

namespace hecnn::encoding {
namespace {

const u128 kT = static_cast<u128>(1) << 60;

TEST(FixedPoint, ZeroAtAnyScale) {
  for (int bits : {0, 1, 8, 40}) {
    const auto si = encode_real(0.0, Scale(mpz_class(1) << bits), kT);
    EXPECT_EQ(si.value, 0);
    EXPECT_EQ(decode_real(si), 0.0);
  }
}

TEST(FixedPoint, ExactlyRepresentable) {
  const auto si = encode_real(-1.5, Scale(4), kT);
  EXPECT_EQ(si.value, -6);
  EXPECT_EQ(decode_real(si), -1.5);
}

TEST(FixedPoint, RoundsHalfAwayFromZero) {
  EXPECT_EQ(round_nearest(mpq_class(5, 2)), 3);
  EXPECT_EQ(round_nearest(mpq_class(-5, 2)), -3);
  EXPECT_EQ(round_nearest(mpq_class(7, 3)), 2);
  EXPECT_EQ(round_nearest(mpq_class(-7, 3)), -2);
  EXPECT_EQ(round_nearest(mpq_class(0)), 0);
}

TEST(FixedPoint, QuantizationBound) {
  Prng rng(1);
  const Scale s(mpz_class(1) << 12);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double v = -10 + 20 * rng.uniform01();
    worst = std::max(worst, std::abs(decode_real(encode_real(v, s, kT)) - v));
  }
  EXPECT_LE(worst, std::ldexp(1.0, -13));
}

TEST(FixedPoint, OverflowNamesMagnitude) {
  try {
    encode_real(1000.0, Scale(1 << 10), 1u << 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("magnitude"), std::string::npos);
  }
  EXPECT_NO_THROW(encode_real(511.0, Scale(1 << 10), 1u << 20));
}

TEST(FixedPoint, ProductDecodesWithinBound) {
  Prng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double a = -8 + 16 * rng.uniform01(), b = -8 + 16 * rng.uniform01();
    const Scale s1(mpz_class(1) << (1 + rng.uniform_below(12)));
    const Scale s2(mpz_class(1) << (1 + rng.uniform_below(12)));
    const auto x = encode_real(a, s1, kT), y = encode_real(b, s2, kT);
    const double got = decode(x.value * y.value, s1 * s2);
    const double bound = std::abs(a) / (2 * s2.get_d()) + std::abs(b) / (2 * s1.get_d()) +
                         1 / (4 * s1.get_d() * s2.get_d());
    EXPECT_LE(std::abs(got - a * b), bound * (1 + 1e-12));
  }
}

TEST(FixedPoint, CenteredRepresentative) {
  const mpz_class t = 7;
  for (int v = -20; v <= 20; ++v) {
    const mpz_class c = center_mod(v, t);
    EXPECT_TRUE(fits(c, t));
    EXPECT_EQ(mpz_class((c - v) % t), 0);
  }
  EXPECT_EQ(center_mod(4, 8), 4);
  EXPECT_EQ(center_mod(5, 8), -3);
  EXPECT_TRUE(fits(4, 8));
  EXPECT_FALSE(fits(-4, 8));
}

TEST(QuantizePoly, LeadingCoefficientIsExact) {
  const auto ap = chebyshev::fit(chebyshev::FuncId::kRelu, 2, -10, 10);
  const Scale s(mpz_class(1) << 12);
  const auto q = quantize_poly(ap.mono_coeffs, 10, s, 0);
  ASSERT_EQ(q.degree(), 2);
  EXPECT_EQ(q.coeffs[2], 1);
  EXPECT_EQ(q.coeffs[0], 0);  // the fit's constant is a rounding artifact
  EXPECT_DOUBLE_EQ(q.realized[2], ap.mono_coeffs[2]);
  EXPECT_NEAR(q.realized[1], ap.mono_coeffs[1], 1e-3);
  EXPECT_EQ(q.out_scale, s * s / exact(ap.mono_coeffs[2]));
}

TEST(QuantizePoly, ParityArtifactsAreDropped) {
  const auto ap = chebyshev::fit(chebyshev::FuncId::kRelu, 7, -10, 10);
  const auto q = quantize_poly(ap.mono_coeffs, 10, Scale(1 << 10), 0);
  EXPECT_EQ(q.degree(), 6);
  EXPECT_EQ(q.coeffs[3], 0);
  EXPECT_EQ(q.coeffs[5], 0);
  EXPECT_NE(q.coeffs[1], 0);
  const auto sg = chebyshev::fit(chebyshev::FuncId::kSigmoid, 7, -5, 5);
  const auto qs = quantize_poly(sg.mono_coeffs, 5, Scale(1 << 10), 0);
  EXPECT_EQ(qs.degree(), 7);
  for (int k : {2, 4, 6}) EXPECT_EQ(qs.coeffs[static_cast<std::size_t>(k)], 0);
  EXPECT_EQ(qs.coeffs[7], -1);
}

TEST(QuantizePoly, IntegerEvaluationTracksRealPolynomial) {
  const auto ap = chebyshev::fit(chebyshev::FuncId::kSigmoid, 5, -5, 5);
  const Scale s(mpz_class(1) << 16);
  const auto q = quantize_poly(ap.mono_coeffs, 5, s, 4);
  Prng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double x = -5 + 10 * rng.uniform01();
    const auto xi = encode_real(x, s, static_cast<u128>(1) << 120);
    const double got = decode(eval_poly(q, xi.value), q.out_scale);
    EXPECT_NEAR(got, chebyshev::horner(ap.mono_coeffs, x), 1e-4);
  }
}

nn::NetworkConfig infer(const std::string& act) {
  return nn::NetworkConfig::preset("infer-fig3", nn::ActivationSpec::parse(act));
}

nn::Tensor fixture_image(int k) {
  const auto ds = data::load_idx(std::string(HECNN_FIXTURE_DIR) + "/two-images-idx3-ubyte",
                                 std::string(HECNN_FIXTURE_DIR) + "/two-labels-idx1-ubyte");
  return ds.images[static_cast<std::size_t>(k)];
}

TEST(Shadow, ZeroImageZeroBiasesGivesZero) {
  const auto c = infer("poly:relu:2:-10:10");
  Prng rng(1);
  const auto m = nn::Model::glorot(c, rng);
  FixedPointConfig fp;
  fp.t = static_cast<u128>(1) << 100;
  const auto r = shadow_eval(c, m, nn::Tensor({28, 28, 1}), fp);
  EXPECT_EQ(r.max_magnitude, 0);
  EXPECT_FALSE(r.overflow);
  EXPECT_EQ(r.per_layer_scales.size(), c.layers.size() + 1);
}

TEST(Shadow, ScaleBookkeeping) {
  const auto c = infer("poly:relu:2:-10:10");
  FixedPointConfig fp;
  fp.t = static_cast<u128>(1) << 100;
  const auto q = QuantizedNetwork::build(c, nn::Model::zeros(c), fp);
  const Scale s8(256), w(1024);
  EXPECT_EQ(q.layers[0].out_scale, s8 * w);
  EXPECT_EQ(q.layers[2].out_scale, q.layers[1].out_scale * 4);
  EXPECT_EQ(q.layers[3].out_scale, q.layers[2].out_scale * w);
  EXPECT_EQ(q.layers[4].out_scale, q.layers[3].out_scale * 4);
}

TEST(Shadow, TinyModulusOverflows) {
  const auto c = infer("poly:relu:2:-10:10");
  Prng rng(2);
  const auto m = nn::Model::glorot(c, rng);
  FixedPointConfig fp;
  fp.t = 1u << 10;
  const auto r = shadow_eval(c, m, fixture_image(1), fp);
  EXPECT_TRUE(r.overflow);
  EXPECT_FALSE(r.first_overflow.empty());
}

TEST(Shadow, DefaultScalesOverflowMediumPreset) {
  // Degree-3 activations at 2^8 inputs and 2^10 weights need far more than
  // the medium preset's 33-bit plaintext modulus.
  const auto c = infer("poly:relu:3:-10:10");
  Prng rng(3);
  const auto m = nn::Model::glorot(c, rng);
  FixedPointConfig fp;
  fp.t = she::HEParams::preset("medium").t;
  const auto r = shadow_eval(c, m, fixture_image(1), fp);
  EXPECT_TRUE(r.overflow);
  EXPECT_EQ(r.first_overflow, "act1");
}

TEST(Shadow, DecodedLogitsTrackFloatNetwork) {
  const auto c = infer("poly:relu:2:-10:10");
  Prng rng(4);
  auto m = nn::Model::glorot(c, rng);
  FixedPointConfig fp;
  fp.t = static_cast<u128>(1) << 126;
  const auto q = QuantizedNetwork::build(c, m, fp);
  for (int k = 0; k < 2; ++k) {
    const auto img = fixture_image(k);
    const auto want = nn::forward(c, m, img).data();
    const auto got = shadow_logits(q, img);
    for (std::size_t j = 0; j < 10; ++j) EXPECT_NEAR(got[j], want[j], 0.02 * (1 + std::abs(want[j])));
  }
}

TEST(Shadow, IntegerConvMatchesFloatConvOnIntegers) {
  const auto c = infer("poly:relu:2:-10:10");
  Prng rng(5);
  auto m = nn::Model::zeros(c);
  for (double& v : m.params["conv1.w"].data()) v = static_cast<double>(rng.uniform_below(5)) - 2;
  for (double& v : m.params["conv1.b"].data()) v = static_cast<double>(rng.uniform_below(5)) - 2;
  FixedPointConfig fp;
  fp.input_scale_bits = 0;
  fp.weight_scale_bits = 0;
  fp.t = static_cast<u128>(1) << 60;
  const auto q = QuantizedNetwork::build(c, m, fp);
  nn::Tensor img({28, 28, 1});
  for (double& v : img.data()) v = static_cast<double>(rng.uniform_below(2));
  const auto r = shadow_eval(q, img, true);
  const auto tr = nn::forward_trace(c, m, img);
  for (std::size_t i = 0; i < tr.outputs[0].size(); ++i) {
    EXPECT_EQ(r.values[1][i].get_d(), tr.outputs[0][i]);
  }
}

TEST(Shadow, RejectsNonPolynomialActivations) {
  const auto c = infer("relu");
  FixedPointConfig fp;
  fp.t = 1u << 20;
  EXPECT_THROW(QuantizedNetwork::build(c, nn::Model::zeros(c), fp), Error);
}

}  // namespace
}  // namespace hecnn::encoding
