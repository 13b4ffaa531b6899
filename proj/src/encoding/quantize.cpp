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

#include "hecnn/encoding/quantize.hpp"

#include <cmath>

#include "hecnn/common/errors.hpp"

namespace hecnn::encoding {

namespace {

mpz_class abs_max(const std::vector<mpz_class>& v) {
  mpz_class m = 0;
  for (const auto& x : v) {
    if (mpz_cmpabs(x.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(x);
  }
  return m;
}

Scale pow_scale(const Scale& s, int k) {
  Scale r = 1;
  for (int i = 0; i < k; ++i) r *= s;
  return r;
}

std::vector<mpz_class> quantize_tensor(const nn::Tensor& t, const Scale& scale) {
  std::vector<mpz_class> out;
  out.reserve(t.size());
  for (double v : t.data()) out.push_back(round_nearest(exact(v) * scale));
  return out;
}

}  // namespace

QuantizedPoly quantize_poly(const std::vector<double>& mono, double radius,
                            const Scale& in_scale, int coeff_scale_bits) {
  if (mono.empty()) throw usage_error("empty activation polynomial");
  std::vector<double> term(mono.size());
  double largest = 0;
  for (std::size_t k = 0; k < mono.size(); ++k) {
    term[k] = std::abs(mono[k]) * std::pow(radius, static_cast<double>(k));
    largest = std::max(largest, term[k]);
  }
  int top = -1;
  for (std::size_t k = 0; k < mono.size(); ++k) {
    if (term[k] > std::ldexp(largest, -40)) top = static_cast<int>(k);
  }
  if (top < 1) throw usage_error("activation polynomial has no non-constant term");
  QuantizedPoly p;
  p.in_scale = in_scale;
  const mpq_class lead = exact(mono[static_cast<std::size_t>(top)]);
  const mpz_class unit = mpz_class(1) << coeff_scale_bits;
  p.out_scale = Scale(unit) * pow_scale(in_scale, top) / abs(lead);
  p.out_scale.canonicalize();
  p.coeffs.assign(static_cast<std::size_t>(top) + 1, 0);
  p.coeffs[static_cast<std::size_t>(top)] = sgn(lead) > 0 ? unit : mpz_class(-unit);
  for (int k = 0; k < top; ++k) {
    if (term[static_cast<std::size_t>(k)] <= std::ldexp(largest, -40)) continue;
    p.coeffs[static_cast<std::size_t>(k)] =
        round_nearest(exact(mono[static_cast<std::size_t>(k)]) * p.out_scale / pow_scale(in_scale, k));
  }
  for (int k = 0; k <= top; ++k) {
    p.realized.push_back(
        mpq_class(mpq_class(p.coeffs[static_cast<std::size_t>(k)]) * pow_scale(in_scale, k) / p.out_scale).get_d());
  }
  return p;
}

mpz_class eval_poly(const QuantizedPoly& p, const mpz_class& x) {
  mpz_class acc = 0;
  for (std::size_t k = p.coeffs.size(); k-- > 0;) acc = acc * x + p.coeffs[k];
  return acc;
}

QuantizedNetwork QuantizedNetwork::build(const nn::NetworkConfig& config, const nn::Model& model,
                                         const FixedPointConfig& fp) {
  fp.validate();
  model.check(config);
  QuantizedNetwork net;
  net.config = config;
  net.fp = fp;
  net.input_scale = fp.input_scale();
  Scale cur = net.input_scale;
  for (const auto& l : config.layers) {
    QuantizedLayer q;
    q.spec = l;
    q.in_scale = cur;
    switch (l.kind) {
      case nn::LayerKind::kConv:
      case nn::LayerKind::kFc:
        q.out_scale = cur * fp.weight_scale();
        q.weights = quantize_tensor(model.at(l.name + ".w"), fp.weight_scale());
        q.bias = quantize_tensor(model.at(l.name + ".b"), q.out_scale);
        break;
      case nn::LayerKind::kPool:
        q.out_scale = cur * static_cast<long>(l.window * l.window);
        break;
      case nn::LayerKind::kActivation: {
        if (l.activation.kind != nn::ActKind::kPoly) {
          throw usage_error("layer " + l.name + " uses " + l.activation.to_string() +
                            "; encrypted inference needs a polynomial activation");
        }
        const auto& ap = l.activation.approx;
        q.poly = quantize_poly(ap.mono_coeffs, std::max(std::abs(ap.a), std::abs(ap.b)), cur,
                               fp.coeff_scale_bits);
        q.out_scale = q.poly.out_scale;
        break;
      }
      case nn::LayerKind::kSoftmax:
        throw usage_error("the inference network must not contain a softmax layer");
    }
    q.out_scale.canonicalize();
    cur = q.out_scale;
    net.layers.push_back(std::move(q));
  }
  if (net.layers.empty()) throw usage_error("network has no layers");
  return net;
}

std::vector<mpz_class> encode_image(const QuantizedNetwork& net, const nn::Tensor& image) {
  if (image.shape() != net.config.input_shape) {
    throw usage_error("image shape " + nn::shape_string(image.shape()) + " does not match " +
                      nn::shape_string(net.config.input_shape));
  }
  return quantize_tensor(image, net.input_scale);
}

std::vector<mpz_class> apply_layer(const QuantizedLayer& q, const std::vector<mpz_class>& in) {
  const auto& l = q.spec;
  std::vector<mpz_class> out(nn::shape_size(l.out_shape));
  switch (l.kind) {
    case nn::LayerKind::kConv: {
      const std::size_t H = l.in_shape[0], W = l.in_shape[1], C = l.in_shape[2];
      const std::size_t OW = l.out_shape[1], F = l.filters, k = l.window;
      for (std::size_t o = 0; o < out.size(); ++o) {
        const std::size_t f = o % F, x = (o / F) % OW, y = o / (F * OW);
        mpz_class acc = q.bias[f];
        for (std::size_t i = 0; i < k; ++i) {
          const auto yy = static_cast<std::ptrdiff_t>(y * l.stride + i) - static_cast<std::ptrdiff_t>(l.padding);
          if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H)) continue;
          for (std::size_t j = 0; j < k; ++j) {
            const auto xx = static_cast<std::ptrdiff_t>(x * l.stride + j) - static_cast<std::ptrdiff_t>(l.padding);
            if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(W)) continue;
            for (std::size_t c = 0; c < C; ++c) {
              const auto& v = in[(static_cast<std::size_t>(yy) * W + static_cast<std::size_t>(xx)) * C + c];
              const auto& w = q.weights[((i * k + j) * C + c) * F + f];
              mpz_addmul(acc.get_mpz_t(), v.get_mpz_t(), w.get_mpz_t());
            }
          }
        }
        out[o] = std::move(acc);
      }
      break;
    }
    case nn::LayerKind::kPool: {
      const std::size_t W = l.in_shape[1], C = l.in_shape[2];
      const std::size_t OW = l.out_shape[1], k = l.window;
      for (std::size_t o = 0; o < out.size(); ++o) {
        const std::size_t c = o % C, x = (o / C) % OW, y = o / (C * OW);
        mpz_class acc = 0;
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) acc += in[((y * l.stride + i) * W + x * l.stride + j) * C + c];
        }
        out[o] = std::move(acc);
      }
      break;
    }
    case nn::LayerKind::kFc: {
      const std::size_t n = in.size();
      for (std::size_t u = 0; u < l.units; ++u) {
        mpz_class acc = q.bias[u];
        for (std::size_t i = 0; i < n; ++i) {
          mpz_addmul(acc.get_mpz_t(), q.weights[u * n + i].get_mpz_t(), in[i].get_mpz_t());
        }
        out[u] = std::move(acc);
      }
      break;
    }
    case nn::LayerKind::kActivation:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = eval_poly(q.poly, in[i]);
      break;
    case nn::LayerKind::kSoftmax:
      throw usage_error("softmax has no integer form");
  }
  return out;
}

void ShadowResult::absorb(const ShadowResult& other) {
  if (layers.empty()) {
    *this = other;
    values.clear();
    return;
  }
  if (other.max_magnitude > max_magnitude) max_magnitude = other.max_magnitude;
  for (std::size_t i = 0; i < layers.size() && i < other.layers.size(); ++i) {
    if (other.layers[i].max_magnitude > layers[i].max_magnitude) {
      layers[i].max_magnitude = other.layers[i].max_magnitude;
    }
    layers[i].overflow = layers[i].overflow || other.layers[i].overflow;
  }
  if (!overflow && other.overflow) first_overflow = other.first_overflow;
  overflow = overflow || other.overflow;
}

ShadowResult shadow_eval(const QuantizedNetwork& net, const nn::Tensor& image, bool keep_values) {
  ShadowResult r;
  const mpz_class t = net.fp.t_mpz();
  auto record = [&](const std::string& name, const Scale& scale, std::vector<mpz_class>&& v) {
    ShadowLayer s{name, scale, abs_max(v), false};
    s.overflow = !fits(s.max_magnitude, t);
    if (s.max_magnitude > r.max_magnitude) r.max_magnitude = s.max_magnitude;
    if (s.overflow && !r.overflow) {
      r.overflow = true;
      r.first_overflow = name;
    }
    r.per_layer_scales.push_back(scale);
    r.layers.push_back(s);
    r.values.push_back(std::move(v));
  };
  record("input", net.input_scale, encode_image(net, image));
  for (const auto& q : net.layers) {
    auto next = apply_layer(q, r.values.back());
    if (!keep_values) r.values.back().clear();
    record(q.spec.name, q.out_scale, std::move(next));
  }
  if (!keep_values) r.values.clear();
  return r;
}

ShadowResult shadow_eval(const nn::NetworkConfig& network, const nn::Model& weights,
                         const nn::Tensor& image, const FixedPointConfig& fp) {
  return shadow_eval(QuantizedNetwork::build(network, weights, fp), image);
}

std::vector<double> shadow_logits(const QuantizedNetwork& net, const nn::Tensor& image) {
  const auto r = shadow_eval(net, image, true);
  std::vector<double> out;
  for (const auto& v : r.values.back()) out.push_back(decode(v, net.output_scale()));
  return out;
}

}  // namespace hecnn::encoding
