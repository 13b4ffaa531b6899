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

#include "hecnn/nn/train.hpp"

#include <cmath>
#include <numeric>

#include "hecnn/common/errors.hpp"
#include "hecnn/common/parallel.hpp"
#include "hecnn/common/prng.hpp"

namespace hecnn::nn {

namespace {

Tensor conv_forward(const LayerSpec& l, const Tensor& in, const Tensor& w, const Tensor& b) {
  const std::size_t H = in.dim(0), W = in.dim(1), C = in.dim(2);
  const std::size_t OH = l.out_shape[0], OW = l.out_shape[1], F = l.filters, k = l.window;
  Tensor out({OH, OW, F});
  const double* wd = w.data().data();
  for (std::size_t y = 0; y < OH; ++y) {
    for (std::size_t x = 0; x < OW; ++x) {
      double* acc = &out.at(y, x, 0);
      for (std::size_t f = 0; f < F; ++f) acc[f] = b[f];
      for (std::size_t i = 0; i < k; ++i) {
        const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y * l.stride + i) -
                                  static_cast<std::ptrdiff_t>(l.padding);
        if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H)) continue;
        for (std::size_t j = 0; j < k; ++j) {
          const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(x * l.stride + j) -
                                    static_cast<std::ptrdiff_t>(l.padding);
          if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(W)) continue;
          const double* px = in.ptr(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), 0);
          for (std::size_t c = 0; c < C; ++c) {
            const double v = px[c];
            const double* wrow = wd + ((i * k + j) * C + c) * F;
            for (std::size_t f = 0; f < F; ++f) acc[f] += v * wrow[f];
          }
        }
      }
    }
  }
  return out;
}

void conv_backward(const LayerSpec& l, const Tensor& in, const Tensor& w, const Tensor& dout,
                   Tensor& dw, Tensor& db, Tensor* din) {
  const std::size_t H = in.dim(0), W = in.dim(1), C = in.dim(2);
  const std::size_t OH = l.out_shape[0], OW = l.out_shape[1], F = l.filters, k = l.window;
  const double* wd = w.data().data();
  double* dwd = dw.data().data();
  for (std::size_t y = 0; y < OH; ++y) {
    for (std::size_t x = 0; x < OW; ++x) {
      const double* g = dout.ptr(y, x, 0);
      for (std::size_t f = 0; f < F; ++f) db[f] += g[f];
      for (std::size_t i = 0; i < k; ++i) {
        const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y * l.stride + i) -
                                  static_cast<std::ptrdiff_t>(l.padding);
        if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H)) continue;
        for (std::size_t j = 0; j < k; ++j) {
          const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(x * l.stride + j) -
                                    static_cast<std::ptrdiff_t>(l.padding);
          if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(W)) continue;
          const auto uy = static_cast<std::size_t>(yy), ux = static_cast<std::size_t>(xx);
          const double* px = in.ptr(uy, ux, 0);
          for (std::size_t c = 0; c < C; ++c) {
            const std::size_t row = ((i * k + j) * C + c) * F;
            const double v = px[c];
            double s = 0;
            for (std::size_t f = 0; f < F; ++f) {
              dwd[row + f] += v * g[f];
              s += wd[row + f] * g[f];
            }
            if (din) din->at(uy, ux, c) += s;
          }
        }
      }
    }
  }
}

Tensor pool_forward(const LayerSpec& l, const Tensor& in) {
  const std::size_t OH = l.out_shape[0], OW = l.out_shape[1], C = in.dim(2), k = l.window;
  Tensor out({OH, OW, C});
  const double inv = 1.0 / static_cast<double>(k * k);
  for (std::size_t y = 0; y < OH; ++y) {
    for (std::size_t x = 0; x < OW; ++x) {
      for (std::size_t c = 0; c < C; ++c) {
        double s = 0;
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) s += in.at(y * l.stride + i, x * l.stride + j, c);
        }
        out.at(y, x, c) = s * inv;
      }
    }
  }
  return out;
}

void pool_backward(const LayerSpec& l, const Tensor& dout, Tensor& din) {
  const std::size_t OH = l.out_shape[0], OW = l.out_shape[1], C = dout.dim(2), k = l.window;
  const double inv = 1.0 / static_cast<double>(k * k);
  for (std::size_t y = 0; y < OH; ++y) {
    for (std::size_t x = 0; x < OW; ++x) {
      for (std::size_t c = 0; c < C; ++c) {
        const double g = dout.at(y, x, c) * inv;
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) din.at(y * l.stride + i, x * l.stride + j, c) += g;
        }
      }
    }
  }
}

Tensor fc_forward(const LayerSpec& l, const Tensor& in, const Tensor& w, const Tensor& b) {
  const std::size_t n = in.size();
  Tensor out({l.units});
  for (std::size_t u = 0; u < l.units; ++u) {
    const double* row = w.data().data() + u * n;
    double s = b[u];
    for (std::size_t i = 0; i < n; ++i) s += row[i] * in[i];
    out[u] = s;
  }
  return out;
}

std::vector<double> softmax(const std::vector<double>& z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  std::vector<double> p(z.size());
  double s = 0;
  for (std::size_t i = 0; i < z.size(); ++i) s += (p[i] = std::exp(z[i] - m));
  for (double& v : p) v /= s;
  return p;
}

std::size_t logits_layer_count(const NetworkConfig& c) {
  return c.has_softmax() ? c.layers.size() - 1 : c.layers.size();
}

struct Sample {
  double loss = 0;
  bool correct = false;
};

Sample backward_one(const NetworkConfig& config, const Model& model, const Tensor& image,
                    int label, Gradients& grads) {
  const ForwardTrace tr = forward_trace(config, model, image);
  const std::size_t L = logits_layer_count(config);
  const Tensor& logits = L ? tr.outputs[L - 1] : tr.input;
  const auto p = softmax(logits.data());
  Sample s;
  s.loss = -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));
  s.correct = argmax(logits.data()) == label;
  Tensor g(logits.shape());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = p[i] - (static_cast<int>(i) == label ? 1 : 0);
  for (std::size_t li = L; li-- > 0;) {
    const LayerSpec& l = config.layers[li];
    const Tensor& in = li ? tr.outputs[li - 1] : tr.input;
    Tensor din(in.shape());
    const bool need_din = li > 0;
    switch (l.kind) {
      case LayerKind::kConv:
        conv_backward(l, in, model.at(l.name + ".w"), g, grads[l.name + ".w"],
                      grads[l.name + ".b"], need_din ? &din : nullptr);
        break;
      case LayerKind::kFc: {
        const Tensor& w = model.at(l.name + ".w");
        Tensor& dw = grads[l.name + ".w"];
        Tensor& db = grads[l.name + ".b"];
        const std::size_t n = in.size();
        for (std::size_t u = 0; u < l.units; ++u) {
          const double gu = g[u];
          db[u] += gu;
          double* drow = dw.data().data() + u * n;
          const double* row = w.data().data() + u * n;
          for (std::size_t i = 0; i < n; ++i) {
            drow[i] += gu * in[i];
            din[i] += gu * row[i];
          }
        }
        break;
      }
      case LayerKind::kPool:
        pool_backward(l, g, din);
        break;
      case LayerKind::kActivation:
        for (std::size_t i = 0; i < in.size(); ++i) din[i] = g[i] * l.activation.derivative(in[i]);
        break;
      case LayerKind::kSoftmax:
        break;
    }
    g = std::move(din);
  }
  return s;
}

Gradients zero_grads(const Model& model) {
  Gradients g;
  for (const auto& [k, t] : model.params) g[k] = Tensor(t.shape());
  return g;
}

void add_into(Gradients& dst, const Gradients& src) {
  for (auto& [k, t] : dst) {
    const auto& s = src.at(k).data();
    auto& d = t.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
  }
}

}  // namespace

ForwardTrace forward_trace(const NetworkConfig& config, const Model& model,
                           const Tensor& input) {
  if (input.shape() != config.input_shape) {
    throw usage_error("input shape " + shape_string(input.shape()) + " does not match network " +
                      config.name + " input " + shape_string(config.input_shape));
  }
  ForwardTrace tr;
  tr.input = input;
  const Tensor* cur = &tr.input;
  tr.outputs.reserve(config.layers.size());
  for (const auto& l : config.layers) {
    Tensor out;
    switch (l.kind) {
      case LayerKind::kConv:
        out = conv_forward(l, *cur, model.at(l.name + ".w"), model.at(l.name + ".b"));
        break;
      case LayerKind::kPool:
        out = pool_forward(l, *cur);
        break;
      case LayerKind::kFc:
        out = fc_forward(l, *cur, model.at(l.name + ".w"), model.at(l.name + ".b"));
        break;
      case LayerKind::kActivation:
        out = *cur;
        for (double& v : out.data()) v = l.activation.apply(v);
        break;
      case LayerKind::kSoftmax:
        out = Tensor(cur->shape(), softmax(cur->data()));
        break;
    }
    if (out.shape() != l.out_shape) {
      throw usage_error("layer " + l.name + " produced " + shape_string(out.shape()) +
                        ", expected " + shape_string(l.out_shape));
    }
    tr.outputs.push_back(std::move(out));
    cur = &tr.outputs.back();
  }
  return tr;
}

Tensor forward(const NetworkConfig& config, const Model& model, const Tensor& input) {
  auto tr = forward_trace(config, model, input);
  return tr.outputs.empty() ? tr.input : std::move(tr.outputs.back());
}

double backward(const NetworkConfig& config, const Model& model,
                const std::vector<Tensor>& images, const std::vector<int>& labels,
                Gradients& grads) {
  if (images.empty() || images.size() != labels.size()) {
    throw usage_error("backward needs a nonempty batch with one label per image");
  }
  grads = zero_grads(model);
  double total = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    total += backward_one(config, model, images[i], labels[i], grads).loss;
  }
  const double inv = 1.0 / static_cast<double>(images.size());
  for (auto& [k, t] : grads) {
    for (double& v : t.data()) v *= inv;
  }
  return total * inv;
}

double loss(const NetworkConfig& config, const Model& model, const std::vector<Tensor>& images,
            const std::vector<int>& labels) {
  const std::size_t L = logits_layer_count(config);
  double total = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto tr = forward_trace(config, model, images[i]);
    const auto p = softmax((L ? tr.outputs[L - 1] : tr.input).data());
    total -= std::log(std::max(p[static_cast<std::size_t>(labels[i])], 1e-300));
  }
  return total / static_cast<double>(images.size());
}

int argmax(const std::vector<double>& values) {
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

int predict(const NetworkConfig& config, const Model& model, const Tensor& image) {
  return argmax(forward(config, model, image).data());
}

double accuracy(const NetworkConfig& config, const Model& model, const data::Dataset& ds,
                int threads) {
  if (ds.size() == 0) return 0;
  std::vector<char> ok(ds.size());
  parallel_for(ds.size(), threads, [&](std::size_t i) {
    ok[i] = predict(config, model, ds.images[i]) == ds.labels[i];
  });
  return static_cast<double>(std::accumulate(ok.begin(), ok.end(), 0)) /
         static_cast<double>(ds.size());
}

TrainResult train(const NetworkConfig& config, const data::Dataset& train_set,
                  const data::Dataset& test_set, const Hyperparams& hp, std::uint64_t seed,
                  const EpochCallback& on_epoch) {
  if (train_set.size() == 0) throw data_error("training set is empty");
  if (hp.batch_size == 0) throw usage_error("batch size must be positive");
  Prng rng(seed);
  Prng init = rng.fork(1);
  Prng order = rng.fork(2);
  TrainResult result;
  result.model = Model::glorot(config, init);
  result.model.meta.seed = seed;
  Model& model = result.model;
  Gradients velocity = zero_grads(model);
  std::vector<std::size_t> idx(train_set.size());
  std::iota(idx.begin(), idx.end(), 0);
  const int threads = std::max(hp.threads, 1);

  for (std::uint32_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[order.uniform_below(i)]);
    double loss_sum = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < idx.size(); start += hp.batch_size) {
      const std::size_t end = std::min(idx.size(), start + hp.batch_size);
      const std::size_t count = end - start;
      const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
      std::vector<Gradients> partial(parts);
      std::vector<double> part_loss(parts, 0);
      std::vector<std::size_t> part_correct(parts, 0);
      parallel_for(parts, threads, [&](std::size_t p) {
        partial[p] = zero_grads(model);
        for (std::size_t j = start + p; j < end; j += parts) {
          const std::size_t ex = idx[j];
          const auto s = backward_one(config, model, train_set.images[ex], train_set.labels[ex],
                                      partial[p]);
          part_loss[p] += s.loss;
          part_correct[p] += s.correct;
        }
      });
      for (std::size_t p = 1; p < parts; ++p) add_into(partial[0], partial[p]);
      double batch_loss = 0;
      for (std::size_t p = 0; p < parts; ++p) {
        batch_loss += part_loss[p];
        correct += part_correct[p];
      }
      if (!std::isfinite(batch_loss)) {
        throw usage_error("training diverged (loss is not finite) in epoch " +
                          std::to_string(epoch) + "; try a smaller learning rate than " +
                          std::to_string(hp.learning_rate));
      }
      loss_sum += batch_loss;
      const double scale = hp.learning_rate / static_cast<double>(count);
      for (auto& [k, t] : model.params) {
        auto& v = velocity[k].data();
        const auto& g = partial[0][k].data();
        auto& w = t.data();
        for (std::size_t i = 0; i < w.size(); ++i) {
          v[i] = hp.momentum * v[i] - scale * g[i];
          w[i] += v[i];
        }
      }
    }
    EpochStats st;
    st.epoch = epoch;
    st.loss = loss_sum / static_cast<double>(idx.size());
    st.train_accuracy = static_cast<double>(correct) / static_cast<double>(idx.size());
    st.test_accuracy = test_set.size() ? accuracy(config, model, test_set, threads) : 0;
    result.curve.push_back(st);
    if (on_epoch) on_epoch(st);
  }
  model.meta.epochs = hp.epochs;
  model.meta.accuracy = test_set.size() ? accuracy(config, model, test_set, threads) : 0;
  return result;
}

}  // namespace hecnn::nn
