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
#include <map>
#include <string>
#include <vector>

#include "hecnn/common/prng.hpp"
#include "hecnn/nn/network.hpp"
#include "hecnn/nn/tensor.hpp"

namespace hecnn::nn {

struct TrainingMeta {
  std::string network;     // preset name
  std::string activation;  // ActivationSpec::to_string
  std::uint64_t seed = 0;
  std::uint32_t epochs = 0;
  double accuracy = 0;     // test accuracy at the end of training
};

// Parameters keyed "<layer>.w" and "<layer>.b". Conv weights have shape
// (window, window, in_channels, filters); fc weights (units, inputs).
struct Model {
  std::map<std::string, Tensor> params;
  TrainingMeta meta;

  // Zero-initialized parameters matching `config`.
  static Model zeros(const NetworkConfig& config);
  // Uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static Model glorot(const NetworkConfig& config, Prng& rng);

  const Tensor& at(const std::string& key) const;
  // Throws a usage error naming the first tensor that disagrees with config.
  void check(const NetworkConfig& config) const;
  std::size_t parameter_count() const;

  // "BFNN" file: version u16, tensor count u16, then per tensor the name
  // (u16 length + bytes), rank u32, dims u32 each, float64 values, all
  // little-endian. Metadata travels as additional "meta." tensors.
  std::vector<std::uint8_t> serialize() const;
  static Model deserialize(const std::vector<std::uint8_t>& bytes);
  void save(const std::string& path) const;
  static Model load(const std::string& path);
};

}  // namespace hecnn::nn
