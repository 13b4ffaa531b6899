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

#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "hecnn/encoding/fixed_point.hpp"
#include "hecnn/nn/model.hpp"
#include "hecnn/nn/network.hpp"
#include "hecnn/nn/tensor.hpp"

namespace hecnn::encoding {

// Integer polynomial sum_k coeffs[k] * X^k mapping inputs at in_scale to
// outputs at out_scale. The leading coefficient is +-2^coeff_scale_bits and
// out_scale = 2^coeff_scale_bits * in_scale^d / |m_d|, so it is exact; the
// others are round(m_k * out_scale / in_scale^k). Monomials whose
// contribution over the interval is below 2^-40 of the largest term are
// parity artifacts of the fit and treated as zero.
struct QuantizedPoly {
  std::vector<mpz_class> coeffs;
  Scale in_scale, out_scale;
  std::vector<double> realized;  // coefficients actually evaluated, in x

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

QuantizedPoly quantize_poly(const std::vector<double>& mono, double radius,
                            const Scale& in_scale, int coeff_scale_bits);
mpz_class eval_poly(const QuantizedPoly& p, const mpz_class& x);

struct QuantizedLayer {
  nn::LayerSpec spec;
  Scale in_scale, out_scale;
  std::vector<mpz_class> weights;  // same layout as the model tensor
  std::vector<mpz_class> bias;     // at out_scale
  QuantizedPoly poly;              // activation layers
};

// The inference network with every parameter mapped to an integer and every
// layer boundary's scale fixed. Shared by the integer shadow and the
// encrypted evaluator, so both perform identical arithmetic.
struct QuantizedNetwork {
  nn::NetworkConfig config;
  FixedPointConfig fp;
  Scale input_scale;
  std::vector<QuantizedLayer> layers;

  const Scale& output_scale() const { return layers.back().out_scale; }

  // Requires a network without softmax whose activations are polynomials.
  static QuantizedNetwork build(const nn::NetworkConfig& config, const nn::Model& model,
                                const FixedPointConfig& fp);
};

// Integer image encoding: round(pixel * input_scale).
std::vector<mpz_class> encode_image(const QuantizedNetwork& net, const nn::Tensor& image);

// One exact integer layer step, used by the shadow pipeline and by tests
// that check the encrypted layers one at a time.
std::vector<mpz_class> apply_layer(const QuantizedLayer& layer,
                                   const std::vector<mpz_class>& in);

struct ShadowLayer {
  std::string name;  // "input" for the encoded image, otherwise the layer name
  Scale scale;
  mpz_class max_magnitude;
  bool overflow = false;
};

struct ShadowResult {
  mpz_class max_magnitude;
  std::vector<Scale> per_layer_scales;
  bool overflow = false;
  std::string first_overflow;       // boundary name, empty when none
  std::vector<ShadowLayer> layers;  // input boundary first
  std::vector<std::vector<mpz_class>> values;  // per boundary, when kept

  // Merges the maxima of another image's run.
  void absorb(const ShadowResult& other);
};

ShadowResult shadow_eval(const QuantizedNetwork& net, const nn::Tensor& image,
                         bool keep_values = false);
ShadowResult shadow_eval(const nn::NetworkConfig& network, const nn::Model& weights,
                         const nn::Tensor& image, const FixedPointConfig& fp);

// Decoded real outputs of the integer pipeline (the quantized network).
std::vector<double> shadow_logits(const QuantizedNetwork& net, const nn::Tensor& image);

}  // namespace hecnn::encoding
