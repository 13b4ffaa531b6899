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

#include "hecnn/encinfer/encinfer.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "hecnn/common/errors.hpp"
#include "hecnn/common/parallel.hpp"
#include "hecnn/she/batch_encoder.hpp"
#include "hecnn/she/decryptor.hpp"
#include "hecnn/she/encryptor.hpp"
#include "hecnn/she/evaluator.hpp"

namespace hecnn::encinfer {

using encoding::QuantizedLayer;
using encoding::QuantizedPoly;
using she::Ciphertext;

void OpCounts::merge(const OpCounts& o) {
  ct_mults += o.ct_mults;
  plain_mults += o.plain_mults;
  additions += o.additions;
  max_depth = std::max(max_depth, o.max_depth);
}

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void require_inputs(const CtVec& in, const QuantizedLayer& layer) {
  const std::size_t want = nn::shape_size(layer.spec.in_shape);
  if (in.size() != want) {
    throw usage_error("layer " + layer.spec.name + " expects " + std::to_string(want) +
                      " ciphertexts, got " + std::to_string(in.size()));
  }
  for (const auto& ct : in) {
    if (ct.scale() != layer.in_scale) {
      throw crypto_error("scale bookkeeping violation at layer " + layer.spec.name + ": input at " +
                         encoding::scale_string(ct.scale()) + ", expected " +
                         encoding::scale_string(layer.in_scale));
    }
  }
}

void add_bias(Ciphertext& ct, const mpz_class& bias, const Scale& scale) {
  she::BatchEncoder enc(ct.context());
  she::Plaintext pt = enc.constant(bias);
  pt.scale = scale;
  she::eval_add_plain_inplace(ct, pt);
}

// Dot product of `inputs` with `weights` plus bias, at the layer's output scale.
Ciphertext linear_output(const std::vector<const Ciphertext*>& inputs,
                         const std::vector<mpz_class>& weights, const mpz_class& bias,
                         const QuantizedLayer& layer) {
  Ciphertext out = she::eval_dot_scalar(inputs, weights, layer.out_scale / layer.in_scale);
  add_bias(out, bias, layer.out_scale);
  return out;
}

class PolyEvaluator {
 public:
  PolyEvaluator(const Ciphertext& x, const QuantizedPoly& p, const she::RelinKeys& rlk,
                OpCounts& ops, const PowerCheck& check)
      : x_(x), p_(p), rlk_(rlk), ops_(ops), check_(check) {
    const int d = p.degree();
    const int half = (static_cast<int>(std::ceil(std::log2(d + 1.0))) + 1) / 2;
    baby_ = 1 << std::max(half, 1);
  }

  Ciphertext run() {
    std::size_t depth = 0;
    Ciphertext out = eval(p_.coeffs, p_.out_scale, depth);
    ops_.max_depth = std::max(ops_.max_depth, depth);
    return out;
  }

 private:
  static int degree_of(const std::vector<mpz_class>& c) {
    for (std::size_t k = c.size(); k-- > 0;) {
      if (c[k] != 0) return static_cast<int>(k);
    }
    return -1;
  }

  Scale in_pow(int k) const {
    Scale s = 1;
    for (int i = 0; i < k; ++i) s *= p_.in_scale;
    return s;
  }

  const Ciphertext& power(int m) {
    if (m == 1) return x_;
    auto it = powers_.find(m);
    if (it != powers_.end()) return it->second;
    int hi = 1;
    while (hi * 2 <= m) hi *= 2;
    Ciphertext r;
    std::size_t depth;
    if (hi == m) {
      const Ciphertext& h = power(m / 2);
      r = she::eval_square(h, rlk_);
      depth = depth_of(m / 2) + 1;
    } else {
      const Ciphertext& a = power(hi);
      const Ciphertext& b = power(m - hi);
      r = she::eval_mul(a, b, rlk_);
      depth = std::max(depth_of(hi), depth_of(m - hi)) + 1;
    }
    ++ops_.ct_mults;
    if (check_) check_(m, r);
    depths_[m] = depth;
    return powers_.emplace(m, std::move(r)).first->second;
  }

  std::size_t depth_of(int m) const { return m == 1 ? 0 : depths_.at(m); }

  // Requires degree_of(c) >= 1. The result is at scale `target`.
  Ciphertext eval(const std::vector<mpz_class>& c, const Scale& target, std::size_t& depth) {
    const int d = degree_of(c);
    std::optional<Ciphertext> acc;
    if (d < baby_) {
      depth = 0;
      for (int j = 1; j <= d; ++j) {
        if (c[static_cast<std::size_t>(j)] == 0) continue;
        Ciphertext term = she::eval_mul_scalar(power(j), c[static_cast<std::size_t>(j)],
                                               target / in_pow(j));
        ++ops_.plain_mults;
        depth = std::max(depth, depth_of(j));
        if (acc) {
          she::eval_add_inplace(*acc, term);
          ++ops_.additions;
        } else {
          acc = std::move(term);
        }
      }
    } else {
      int giant = baby_;
      while (giant * 2 <= d) giant *= 2;
      std::vector<mpz_class> lo(c.begin(), c.begin() + giant);
      lo[0] = 0;
      std::vector<mpz_class> hi(c.begin() + giant, c.begin() + d + 1);
      const Scale hi_target = target / in_pow(giant);
      const Ciphertext& g = power(giant);
      if (degree_of(hi) == 0) {
        acc = she::eval_mul_scalar(g, hi[0], hi_target);
        ++ops_.plain_mults;
        depth = depth_of(giant);
      } else {
        std::size_t hi_depth = 0;
        const Ciphertext h = eval(hi, hi_target, hi_depth);
        acc = she::eval_mul(g, h, rlk_);
        ++ops_.ct_mults;
        depth = std::max(depth_of(giant), hi_depth) + 1;
      }
      if (degree_of(lo) >= 1) {
        std::size_t lo_depth = 0;
        she::eval_add_inplace(*acc, eval(lo, target, lo_depth));
        ++ops_.additions;
        depth = std::max(depth, lo_depth);
      }
    }
    if (c[0] != 0) {
      add_bias(*acc, c[0], target);
      ++ops_.additions;
    }
    return std::move(*acc);
  }

  const Ciphertext& x_;
  const QuantizedPoly& p_;
  const she::RelinKeys& rlk_;
  OpCounts& ops_;
  const PowerCheck& check_;
  int baby_;
  std::map<int, Ciphertext> powers_;
  std::map<int, std::size_t> depths_;
};

std::string ordinal(std::size_t k) {
  switch (k) {
    case 1:
      return "1st";
    case 2:
      return "2nd";
    case 3:
      return "3rd";
    default:
      return std::to_string(k) + "th";
  }
}

void merge_counts(OpCounts* dst, const std::vector<OpCounts>& parts) {
  if (!dst) return;
  for (const auto& p : parts) dst->merge(p);
}

}  // namespace

EncImageBatch encrypt_batch(const she::PublicKey& pk, const std::vector<nn::Tensor>& images,
                            const encoding::FixedPointConfig& fp, Prng& rng, int threads) {
  const auto& ctx = pk.ctx;
  if (images.empty()) throw usage_error("cannot encrypt an empty batch");
  if (images.size() > ctx->n()) {
    throw crypto_error("batch of " + std::to_string(images.size()) + " images exceeds the " +
                       std::to_string(ctx->n()) + " plaintext slots");
  }
  if (fp.t != ctx->t().value()) throw usage_error("fixed-point t differs from the key's t");
  const auto& shape = images[0].shape();
  for (const auto& img : images) {
    if (img.shape() != shape) throw usage_error("images in a batch must share one shape");
    for (double v : img.data()) {
      if (!(v >= 0 && v <= 1)) throw data_error("pixel values must lie in [0, 1]");
    }
  }
  EncImageBatch batch;
  batch.batch_size = images.size();
  batch.scale = fp.input_scale();
  const std::size_t pixels = images[0].size();
  std::vector<Prng> streams;
  streams.reserve(pixels);
  for (std::size_t p = 0; p < pixels; ++p) streams.push_back(rng.fork(p));
  batch.pixels.resize(pixels);
  she::BatchEncoder encoder(ctx);
  parallel_for(pixels, threads, [&](std::size_t p) {
    std::vector<mpz_class> slots(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      slots[i] = encoding::encode_real(images[i][p], batch.scale, fp.t).value;
    }
    she::Plaintext pt = encoder.encode_mpz(slots);
    pt.scale = batch.scale;
    batch.pixels[p] = she::encrypt(pk, pt, streams[p]);
  });
  return batch;
}

Ciphertext conv_output(const CtVec& in, const QuantizedLayer& layer, std::size_t o, OpCounts& ops) {
  const auto& l = layer.spec;
  const std::size_t H = l.in_shape[0], W = l.in_shape[1], C = l.in_shape[2];
  const std::size_t OW = l.out_shape[1], F = l.filters, k = l.window;
  if (o >= nn::shape_size(l.out_shape)) throw usage_error("convolution output index out of range");
  const std::size_t f = o % F, x = (o / F) % OW, y = o / (F * OW);
  std::vector<const Ciphertext*> inputs;
  std::vector<mpz_class> weights;
  for (std::size_t i = 0; i < k; ++i) {
    const auto yy = static_cast<std::ptrdiff_t>(y * l.stride + i) - static_cast<std::ptrdiff_t>(l.padding);
    if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H)) continue;
    for (std::size_t j = 0; j < k; ++j) {
      const auto xx = static_cast<std::ptrdiff_t>(x * l.stride + j) - static_cast<std::ptrdiff_t>(l.padding);
      if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(W)) continue;
      for (std::size_t c = 0; c < C; ++c) {
        inputs.push_back(&in[(static_cast<std::size_t>(yy) * W + static_cast<std::size_t>(xx)) * C + c]);
        weights.push_back(layer.weights[((i * k + j) * C + c) * F + f]);
      }
    }
  }
  ops.plain_mults += inputs.size();
  ops.additions += inputs.size();
  return linear_output(inputs, weights, layer.bias[f], layer);
}

CtVec conv_layer_enc(const CtVec& in, const QuantizedLayer& layer, int threads, OpCounts* ops) {
  require_inputs(in, layer);
  CtVec out(nn::shape_size(layer.spec.out_shape));
  std::vector<OpCounts> counts(out.size());
  parallel_for(out.size(), threads, [&](std::size_t o) { out[o] = conv_output(in, layer, o, counts[o]); });
  merge_counts(ops, counts);
  return out;
}

CtVec pool_layer_enc(const CtVec& in, const QuantizedLayer& layer, int threads, OpCounts* ops) {
  require_inputs(in, layer);
  const auto& l = layer.spec;
  const std::size_t W = l.in_shape[1], C = l.in_shape[2];
  if (l.in_shape[0] % 2 || W % 2) throw usage_error("pooling needs even spatial dimensions");
  const std::size_t OW = l.out_shape[1], k = l.window;
  CtVec out(nn::shape_size(l.out_shape));
  parallel_for(out.size(), threads, [&](std::size_t o) {
    const std::size_t c = o % C, x = (o / C) % OW, y = o / (C * OW);
    Ciphertext acc = in[((y * l.stride) * W + x * l.stride) * C + c];
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == 0 && j == 0) continue;
        she::eval_add_inplace(acc, in[((y * l.stride + i) * W + x * l.stride + j) * C + c]);
      }
    }
    acc.set_scale(layer.out_scale);
    out[o] = std::move(acc);
  });
  if (ops) ops->additions += out.size() * (k * k - 1);
  return out;
}

CtVec fc_layer_enc(const CtVec& in, const QuantizedLayer& layer, int threads, OpCounts* ops) {
  require_inputs(in, layer);
  const auto& l = layer.spec;
  const std::size_t n = in.size();
  std::vector<const Ciphertext*> inputs(n);
  for (std::size_t i = 0; i < n; ++i) inputs[i] = &in[i];
  CtVec out(l.units);
  parallel_for(l.units, threads, [&](std::size_t u) {
    const std::vector<mpz_class> row(layer.weights.begin() + static_cast<std::ptrdiff_t>(u * n),
                                     layer.weights.begin() + static_cast<std::ptrdiff_t>((u + 1) * n));
    out[u] = linear_output(inputs, row, layer.bias[u], layer);
  });
  if (ops) {
    ops->plain_mults += l.units * n;
    ops->additions += l.units * n;
  }
  return out;
}

Ciphertext eval_poly_enc(const Ciphertext& x, const QuantizedPoly& poly, const she::RelinKeys& rlk,
                         OpCounts* ops, const PowerCheck& check) {
  if (poly.degree() < 1) throw usage_error("activation polynomial must have degree >= 1");
  if (x.scale() != poly.in_scale) {
    throw crypto_error("scale bookkeeping violation: activation input at " +
                       encoding::scale_string(x.scale()) + ", expected " +
                       encoding::scale_string(poly.in_scale));
  }
  OpCounts local;
  PolyEvaluator ev(x, poly, rlk, local, check);
  Ciphertext out = ev.run();
  if (ops) ops->merge(local);
  return out;
}

CtVec activation_layer_enc(const CtVec& in, const QuantizedLayer& layer, const she::RelinKeys& rlk,
                           int threads, OpCounts* ops, const PowerCheck& check) {
  require_inputs(in, layer);
  CtVec out(in.size());
  std::vector<OpCounts> counts(in.size());
  parallel_for(in.size(), threads, [&](std::size_t i) {
    out[i] = eval_poly_enc(in[i], layer.poly, rlk, &counts[i], check);
  });
  merge_counts(ops, counts);
  return out;
}

CtVec apply_layer_enc(const CtVec& in, const QuantizedLayer& layer, const she::RelinKeys& rlk,
                      int threads, OpCounts* ops, const PowerCheck& check) {
  switch (layer.spec.kind) {
    case nn::LayerKind::kConv:
      return conv_layer_enc(in, layer, threads, ops);
    case nn::LayerKind::kPool:
      return pool_layer_enc(in, layer, threads, ops);
    case nn::LayerKind::kFc:
      return fc_layer_enc(in, layer, threads, ops);
    case nn::LayerKind::kActivation:
      return activation_layer_enc(in, layer, rlk, threads, ops, check);
    case nn::LayerKind::kSoftmax:
      break;
  }
  throw usage_error("softmax cannot be evaluated under encryption");
}

encoding::ShadowResult static_bound(const encoding::QuantizedNetwork& net) {
  using encoding::ShadowLayer;
  encoding::ShadowResult r;
  const mpz_class t = net.fp.t_mpz();
  std::vector<mpz_class> lo(nn::shape_size(net.config.input_shape), 0);
  std::vector<mpz_class> hi(lo.size(), encoding::round_nearest(net.input_scale));
  auto record = [&](const std::string& name, const Scale& scale) {
    ShadowLayer s{name, scale, 0, false};
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (abs(lo[i]) > s.max_magnitude) s.max_magnitude = abs(lo[i]);
      if (abs(hi[i]) > s.max_magnitude) s.max_magnitude = abs(hi[i]);
    }
    s.overflow = !encoding::fits(s.max_magnitude, t);
    if (s.max_magnitude > r.max_magnitude) r.max_magnitude = s.max_magnitude;
    if (s.overflow && !r.overflow) {
      r.overflow = true;
      r.first_overflow = name;
    }
    r.per_layer_scales.push_back(scale);
    r.layers.push_back(s);
  };
  record("input", net.input_scale);
  for (const auto& q : net.layers) {
    const auto& l = q.spec;
    std::vector<mpz_class> nlo, nhi;
    if (l.kind == nn::LayerKind::kActivation) {
      for (std::size_t i = 0; i < lo.size(); ++i) {
        const mpz_class b = std::max(abs(lo[i]), abs(hi[i]));
        mpz_class bound = 0, p = 1;
        for (const auto& c : q.poly.coeffs) {
          bound += abs(c) * p;
          p *= b;
        }
        nlo.push_back(-bound);
        nhi.push_back(bound);
      }
    } else {
      // Linear layers: evaluate the integer layer on the interval endpoints
      // weight by weight.
      encoding::QuantizedLayer pos = q, neg = q;
      for (std::size_t i = 0; i < q.weights.size(); ++i) {
        pos.weights[i] = sgn(q.weights[i]) > 0 ? q.weights[i] : mpz_class(0);
        neg.weights[i] = sgn(q.weights[i]) < 0 ? q.weights[i] : mpz_class(0);
      }
      auto zero_bias = [](encoding::QuantizedLayer& z) {
        for (auto& b : z.bias) b = 0;
      };
      if (l.kind == nn::LayerKind::kPool) {
        nlo = encoding::apply_layer(q, lo);
        nhi = encoding::apply_layer(q, hi);
      } else {
        zero_bias(neg);
        const auto a = encoding::apply_layer(pos, lo), b = encoding::apply_layer(neg, hi);
        const auto c = encoding::apply_layer(pos, hi), d = encoding::apply_layer(neg, lo);
        for (std::size_t i = 0; i < a.size(); ++i) {
          nlo.push_back(a[i] + b[i]);
          nhi.push_back(c[i] + d[i]);
        }
      }
    }
    lo = std::move(nlo);
    hi = std::move(nhi);
    record(l.name, q.out_scale);
  }
  return r;
}

namespace {

// Length of a conv [-> activation] -> pool run starting at layer i whose
// pooling windows do not overlap (1 when no such run starts there).
std::size_t fusable_group(const encoding::QuantizedNetwork& net, std::size_t i) {
  const auto& layers = net.layers;
  if (layers[i].spec.kind != nn::LayerKind::kConv) return 1;
  std::size_t j = i + 1;
  if (j < layers.size() && layers[j].spec.kind == nn::LayerKind::kActivation) ++j;
  if (j >= layers.size() || layers[j].spec.kind != nn::LayerKind::kPool) return 1;
  if (layers[j].spec.window != layers[j].spec.stride) return 1;
  return j - i + 1;
}

struct FusedResult {
  CtVec out;
  std::vector<CtVec> samples;  // inner-layer outputs of evenly spaced windows
  std::vector<double> seconds;
  std::vector<OpCounts> ops;
};

// Evaluates conv [-> activation] -> pool one pooling window at a time, so the
// full-resolution intermediates are never held in memory. Per-layer times
// split the wall time in proportion to the measured work of each stage.
FusedResult run_fused(const encoding::QuantizedNetwork& net, std::size_t first, std::size_t group,
                      const CtVec& in, const she::RelinKeys& rlk, const InferOptions& options) {
  const auto& conv = net.layers[first];
  const auto& pool = net.layers[first + group - 1];
  const QuantizedLayer* act = group == 3 ? &net.layers[first + 1] : nullptr;
  require_inputs(in, conv);
  const auto& p = pool.spec;
  const std::size_t PW = p.in_shape[1], C = p.in_shape[2], OW = p.out_shape[1], k = p.window;
  const std::size_t count = nn::shape_size(p.out_shape);
  constexpr std::size_t kSamples = 8;
  FusedResult r;
  r.out.resize(count);
  r.samples.assign(group - 1, CtVec{});
  std::vector<std::vector<OpCounts>> ops(group, std::vector<OpCounts>(count));
  std::vector<std::vector<double>> busy(group, std::vector<double>(count, 0.0));
  const std::size_t samples = std::min(count, kSamples);
  std::vector<std::size_t> sample_of(count, samples);
  for (std::size_t s = 0; s < samples; ++s) {
    sample_of[samples == 1 ? 0 : s * (count - 1) / (samples - 1)] = s;
  }
  std::vector<CtVec> inner(samples);
  std::vector<CtVec> inner_act(samples);
  const double t0 = now_seconds();
  parallel_for(count, options.threads, [&](std::size_t o) {
    const std::size_t c = o % C, x = (o / C) % OW, y = o / (C * OW);
    std::optional<Ciphertext> acc;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t pos = ((y * p.stride + i) * PW + x * p.stride + j) * C + c;
        double s = now_seconds();
        Ciphertext v = conv_output(in, conv, pos, ops[0][o]);
        busy[0][o] += now_seconds() - s;
        if (sample_of[o] < samples) inner[sample_of[o]].push_back(v);
        if (act) {
          s = now_seconds();
          v = eval_poly_enc(v, act->poly, rlk, &ops[1][o], options.power_check);
          busy[1][o] += now_seconds() - s;
          if (sample_of[o] < samples) inner_act[sample_of[o]].push_back(v);
        }
        if (v.scale() != pool.in_scale) {
          throw crypto_error("scale bookkeeping violation at layer " + p.name);
        }
        s = now_seconds();
        if (acc) {
          she::eval_add_inplace(*acc, v);
          ++ops[group - 1][o].additions;
        } else {
          acc = std::move(v);
        }
        busy[group - 1][o] += now_seconds() - s;
      }
    }
    acc->set_scale(pool.out_scale);
    r.out[o] = std::move(*acc);
  });
  const double wall = now_seconds() - t0;
  double total = 0;
  std::vector<double> per(group, 0.0);
  for (std::size_t g = 0; g < group; ++g) {
    for (double b : busy[g]) per[g] += b;
    total += per[g];
  }
  for (std::size_t g = 0; g < group; ++g) {
    r.seconds.push_back(total > 0 ? wall * per[g] / total : 0.0);
    OpCounts merged;
    merge_counts(&merged, ops[g]);
    r.ops.push_back(merged);
  }
  for (const auto& v : inner) r.samples[0].insert(r.samples[0].end(), v.begin(), v.end());
  if (act) {
    for (const auto& v : inner_act) r.samples[1].insert(r.samples[1].end(), v.begin(), v.end());
  }
  return r;
}

}  // namespace

InferResult infer_encrypted(const encoding::QuantizedNetwork& net, const EncImageBatch& batch,
                            const she::RelinKeys& rlk, const InferOptions& options) {
  if (batch.pixels.empty()) throw usage_error("empty encrypted batch");
  if (batch.scale != net.input_scale) {
    throw crypto_error("batch was encrypted at scale " + encoding::scale_string(batch.scale) +
                       " but the network expects " + encoding::scale_string(net.input_scale));
  }
  if (batch.pixels[0].context()->t().value() != net.fp.t) {
    throw crypto_error("the network was quantized for a different plaintext modulus");
  }
  const encoding::ShadowResult computed =
      options.certificate ? encoding::ShadowResult{} : static_bound(net);
  const encoding::ShadowResult& cert = options.certificate ? *options.certificate : computed;
  if (cert.overflow && !options.allow_overflow) {
    std::string where = cert.first_overflow;
    mpz_class mag = 0;
    for (const auto& l : cert.layers) {
      if (l.name == where) mag = l.max_magnitude;
    }
    std::ostringstream os;
    os << "refusing to run: integer intermediates at layer " << where << " reach 2^"
       << std::fixed << std::setprecision(1) << std::log2(std::max(mag.get_d(), 1.0))
       << " but the plaintext modulus only holds magnitudes below t/2 = 2^"
       << std::log2(net.fp.t_mpz().get_d()) - 1
       << " (see shadow_eval; lower the fixed-point scales or use a larger t)";
    throw crypto_error(os.str());
  }
  InferResult result;
  CtVec cur;
  const CtVec* input = &batch.pixels;
  std::size_t idx = 0;
  auto start_report = [&](std::size_t i) {
    LayerReport rep;
    rep.name = table_row_name(net, i);
    rep.layer = net.layers[i].spec.name;
    rep.description = layer_description(net.layers[i]);
    return rep;
  };
  const std::size_t stop = options.max_layers ? std::min(options.max_layers, net.layers.size())
                                              : net.layers.size();
  while (idx < stop) {
    const std::size_t group = options.on_layer ? 1 : fusable_group(net, idx);
    if (group > 1 && idx + group <= stop) {
      std::vector<LayerReport> reps;
      for (std::size_t i = 0; i < group; ++i) reps.push_back(start_report(idx + i));
      if (options.probe) reps[0].nb_before = options.probe(*input);
      FusedResult fr = run_fused(net, idx, group, *input, rlk, options);
      for (std::size_t i = 0; i < group; ++i) {
        reps[i].seconds = fr.seconds[i];
        reps[i].ops = fr.ops[i];
        reps[i].ct_count = nn::shape_size(net.layers[idx + i].spec.out_shape);
        if (options.probe) {
          if (i > 0) reps[i].nb_before = reps[i - 1].nb_after;
          reps[i].nb_after = options.probe(i + 1 < group ? fr.samples[i] : fr.out);
        }
        result.reports.push_back(reps[i]);
      }
      cur = std::move(fr.out);
      input = &cur;
      idx += group;
      continue;
    }
    const auto& q = net.layers[idx];
    LayerReport rep = start_report(idx);
    if (options.probe) rep.nb_before = options.probe(*input);
    const double t0 = now_seconds();
    CtVec next = apply_layer_enc(*input, q, rlk, options.threads, &rep.ops, options.power_check);
    rep.seconds = now_seconds() - t0;
    if (options.probe) rep.nb_after = options.probe(next);
    rep.ct_count = next.size();
    if (options.on_layer) options.on_layer(q, next);
    cur = std::move(next);
    input = &cur;
    result.reports.push_back(rep);
    ++idx;
  }
  if (input != &cur) cur = *input;
  result.logits.batch_size = batch.batch_size;
  result.logits.scale = cur.empty() ? Scale(1) : cur[0].scale();
  if (idx == net.layers.size()) result.logits.values = cur;
  result.last = std::move(cur);
  return result;
}

std::vector<mpz_class> decrypt_slots(const she::SecretKey& sk, const Ciphertext& ct,
                                     std::size_t count) {
  const she::Plaintext pt = she::decrypt(sk, ct);
  auto slots = she::BatchEncoder(sk.ctx).decode_centered(pt);
  slots.resize(std::min(count, slots.size()));
  return slots;
}

DecryptedLogits decrypt_logits(const she::SecretKey& sk, const EncLogits& logits) {
  DecryptedLogits out;
  const std::size_t classes = logits.values.size();
  out.values.assign(logits.batch_size, std::vector<double>(classes));
  out.integers.assign(logits.batch_size, std::vector<mpz_class>(classes));
  out.ok = true;
  out.min_budget = std::numeric_limits<int>::max();
  she::BatchEncoder enc(sk.ctx);
  for (std::size_t j = 0; j < classes; ++j) {
    const auto r = she::decrypt_checked(sk, logits.values[j]);
    out.min_budget = std::min(out.min_budget, r.noise_budget);
    out.ok = out.ok && r.ok;
    const auto slots = enc.decode_centered(r.plain);
    for (std::size_t i = 0; i < logits.batch_size; ++i) {
      out.integers[i][j] = slots[i];
      out.values[i][j] = encoding::decode(slots[i], logits.scale);
    }
  }
  if (classes == 0) out.min_budget = 0;
  for (std::size_t i = 0; i < logits.batch_size; ++i) {
    int best = 0;
    for (std::size_t j = 1; j < classes; ++j) {
      if (out.integers[i][j] > out.integers[i][static_cast<std::size_t>(best)]) best = static_cast<int>(j);
    }
    out.predicted.push_back(best);
  }
  return out;
}

std::string table_row_name(const encoding::QuantizedNetwork& net, std::size_t layer_index) {
  const auto kind = net.layers[layer_index].spec.kind;
  std::size_t k = 0;
  for (std::size_t i = 0; i <= layer_index; ++i) k += net.layers[i].spec.kind == kind;
  switch (kind) {
    case nn::LayerKind::kConv:
      return ordinal(k) + " convolution layer";
    case nn::LayerKind::kActivation:
      return ordinal(k) + " activation function";
    case nn::LayerKind::kPool:
      return ordinal(k) + " pooling layer";
    case nn::LayerKind::kFc:
      return ordinal(k) + " fully connected layer";
    case nn::LayerKind::kSoftmax:
      break;
  }
  return "softmax";
}

std::string layer_description(const QuantizedLayer& q) {
  const auto& l = q.spec;
  std::ostringstream os;
  switch (l.kind) {
    case nn::LayerKind::kConv:
      os << l.window << "x" << l.window << " conv, " << l.filters << " filters -> "
         << nn::shape_string(l.out_shape);
      break;
    case nn::LayerKind::kActivation:
      os << "degree-" << q.poly.degree() << " polynomial (" << l.activation.to_string() << ")";
      break;
    case nn::LayerKind::kPool:
      os << "mean pooling " << l.window << "x" << l.window << " -> " << nn::shape_string(l.out_shape);
      break;
    case nn::LayerKind::kFc:
      os << "fully connects " << nn::shape_size(l.in_shape) << " -> " << l.units;
      break;
    case nn::LayerKind::kSoftmax:
      os << "softmax";
      break;
  }
  return os.str();
}

namespace {

std::string nb(int v) { return v < 0 ? "-" : std::to_string(v); }

}  // namespace

std::string format_report(const std::vector<LayerReport>& reports) {
  std::size_t w_name = 5, w_desc = 11;
  for (const auto& r : reports) {
    w_name = std::max(w_name, r.name.size());
    w_desc = std::max(w_desc, r.description.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w_name)) << "Layer" << " | "
     << std::setw(static_cast<int>(w_desc)) << "Description" << " | " << std::right
     << std::setw(10) << "Time(s)" << " | " << std::setw(9) << "NB-before" << " | "
     << std::setw(8) << "NB-after" << "\n";
  os << std::string(w_name + w_desc + 44, '-') << "\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(static_cast<int>(w_name)) << r.name << " | "
       << std::setw(static_cast<int>(w_desc)) << r.description << " | " << std::right
       << std::setw(10) << std::fixed << std::setprecision(3) << r.seconds << " | "
       << std::setw(9) << nb(r.nb_before) << " | " << std::setw(8) << nb(r.nb_after) << "\n";
  }
  return os.str();
}

std::string format_report_csv(const std::vector<LayerReport>& reports) {
  std::ostringstream os;
  os << "layer,description,time_s,nb_before,nb_after,ciphertexts,ct_mults,plain_mults,additions\n";
  for (const auto& r : reports) {
    os << r.name << ",\"" << r.description << "\"," << std::fixed << std::setprecision(6) << r.seconds
       << "," << r.nb_before << "," << r.nb_after << "," << r.ct_count << "," << r.ops.ct_mults
       << "," << r.ops.plain_mults << "," << r.ops.additions << "\n";
  }
  return os.str();
}

}  // namespace hecnn::encinfer
