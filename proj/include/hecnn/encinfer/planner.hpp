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

#include <string>
#include <vector>

#include "hecnn/encoding/quantize.hpp"
#include "hecnn/she/params.hpp"

namespace hecnn::encinfer {

struct PlanStep {
  std::string layer;
  double budget_before = 0;
  double budget_after = 0;
  bool overflow = false;  // integer magnitudes exceed t/2 after this layer
};

// Predicted noise budget per layer from a cost model calibrated against this
// implementation: fresh budget log2(q) - 1 - max(2 log2 t, log2 t + log2 n + 4),
// log2 t + log2 n - 1 bits per relinearized multiplication, log2 of the
// largest absolute weight row sum per linear layer and log2(window^2) per pool.
struct NoisePlan {
  double fresh_budget = 0;
  double mult_cost = 0;
  std::vector<PlanStep> steps;
  bool exhausted = false;
  std::string exhausted_at;
  bool overflow = false;
  std::string overflow_at;

  std::string summary() const;
};

// Shadow maxima over calibration images. A layer counts as overflowing when
// its maximum times 2^headroom_bits does not fit in (-t/2, t/2].
encoding::ShadowResult calibrate(const encoding::QuantizedNetwork& net,
                                 const std::vector<nn::Tensor>& images, int headroom_bits,
                                 int threads = 1);

// Smallest plaintext modulus bit count whose primes hold the calibrated
// maxima with the given headroom.
int required_t_bits(const encoding::ShadowResult& shadow, int headroom_bits);

NoisePlan plan_noise(const she::HEParams& params, const encoding::QuantizedNetwork& net,
                     const encoding::ShadowResult& magnitudes);

}  // namespace hecnn::encinfer
