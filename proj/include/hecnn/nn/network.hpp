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

#include <cstddef>
#include <string>
#include <vector>

#include "hecnn/chebyshev/chebyshev.hpp"
#include "hecnn/nn/tensor.hpp"

namespace hecnn::nn {

enum class LayerKind { kConv, kActivation, kPool, kFc, kSoftmax };

enum class ActKind { kRelu, kSigmoid, kPoly };

// "relu", "sigmoid" or "poly:<func>:<degree>:<a>:<b>".
struct ActivationSpec {
  ActKind kind = ActKind::kRelu;
  chebyshev::ChebApprox approx;  // fitted when kind == kPoly

  static ActivationSpec parse(const std::string& text);
  static ActivationSpec poly(chebyshev::FuncId func, int degree, double a, double b);
  std::string to_string() const;
  double apply(double x) const;
  double derivative(double x) const;
};

struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  std::string name;
  std::size_t window = 0;   // conv and pool
  std::size_t stride = 1;   // conv and pool
  std::size_t padding = 0;  // conv
  std::size_t filters = 0;  // conv output channels
  std::size_t units = 0;    // fc outputs
  ActivationSpec activation;

  // Filled in by NetworkConfig::build.
  std::vector<std::size_t> in_shape, out_shape;
};

struct NetworkConfig {
  std::string name;
  std::vector<std::size_t> input_shape;
  std::vector<LayerSpec> layers;

  // Computes and validates every layer's shape; throws a usage error naming
  // the first layer whose input cannot be processed.
  void build();
  const std::vector<std::size_t>& output_shape() const;
  bool has_softmax() const;
  // Activation layers in order.
  std::vector<const LayerSpec*> activations() const;

  // Replaces every activation layer's function.
  void set_activation(const ActivationSpec& act);

  // "train-fig2" or "infer-fig3" with the given activation.
  static NetworkConfig preset(const std::string& name, const ActivationSpec& act);
  static std::vector<std::string> preset_names();
};

std::string layer_kind_name(LayerKind kind);

}  // namespace hecnn::nn
