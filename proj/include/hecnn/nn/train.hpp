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

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "hecnn/data/mnist.hpp"
#include "hecnn/nn/model.hpp"
#include "hecnn/nn/network.hpp"
#include "hecnn/nn/tensor.hpp"

namespace hecnn::nn {

// Per-layer outputs of one forward pass; trace[i] is the output of layer i.
struct ForwardTrace {
  Tensor input;
  std::vector<Tensor> outputs;
  const Tensor& result() const { return outputs.back(); }
};

Tensor forward(const NetworkConfig& config, const Model& model, const Tensor& input);
ForwardTrace forward_trace(const NetworkConfig& config, const Model& model,
                           const Tensor& input);

using Gradients = std::map<std::string, Tensor>;

// Mean cross-entropy of softmax(logits) over the batch and its gradient with
// respect to every parameter. A trailing softmax layer in `config` is treated
// as part of the loss.
double backward(const NetworkConfig& config, const Model& model,
                const std::vector<Tensor>& images, const std::vector<int>& labels,
                Gradients& grads);
double loss(const NetworkConfig& config, const Model& model,
            const std::vector<Tensor>& images, const std::vector<int>& labels);

struct Hyperparams {
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 64;
  std::uint32_t epochs = 10;
  int threads = 1;
};

struct EpochStats {
  std::uint32_t epoch = 0;
  double loss = 0;
  double train_accuracy = 0;
  double test_accuracy = 0;
};

struct TrainResult {
  Model model;
  std::vector<EpochStats> curve;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Mini-batch SGD with momentum. With threads > 1 each batch's gradient is
// summed from per-thread partials in a fixed order, so results are
// reproducible for a fixed thread count but differ across thread counts.
TrainResult train(const NetworkConfig& config, const data::Dataset& train_set,
                  const data::Dataset& test_set, const Hyperparams& hp,
                  std::uint64_t seed, const EpochCallback& on_epoch = {});

int argmax(const std::vector<double>& values);
int predict(const NetworkConfig& config, const Model& model, const Tensor& image);
double accuracy(const NetworkConfig& config, const Model& model,
                const data::Dataset& ds, int threads = 1);

}  // namespace hecnn::nn
