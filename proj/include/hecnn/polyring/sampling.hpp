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

#include "hecnn/common/prng.hpp"
#include "hecnn/polyring/ring.hpp"

namespace hecnn::polyring {

inline constexpr double kDefaultSigma = 3.2;

RingElement sample_uniform(const RingParamsPtr& params, Prng& rng);
RingElement sample_ternary(const RingParamsPtr& params, Prng& rng);
// Centered discrete Gaussian truncated at 6 sigma.
RingElement sample_error(const RingParamsPtr& params, double sigma, Prng& rng);

// Raw signed draws, shared with code that needs the integers themselves.
std::vector<std::int64_t> draw_ternary(std::size_t n, Prng& rng);
std::vector<std::int64_t> draw_gaussian(std::size_t n, double sigma, Prng& rng);

}  // namespace hecnn::polyring
