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

#include "hecnn/polyring/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace hecnn::polyring {

RingElement sample_uniform(const RingParamsPtr& params, Prng& rng) {
  RingElement out(params);
  for (std::size_t i = 0; i < params->size(); ++i) {
    const std::uint64_t p = params->modulus(i).value();
    for (auto& v : out.residue(i)) v = rng.uniform_below(p);
  }
  return out;
}

std::vector<std::int64_t> draw_ternary(std::size_t n, Prng& rng) {
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = static_cast<std::int64_t>(rng.uniform_below(3)) - 1;
  return out;
}

std::vector<std::int64_t> draw_gaussian(std::size_t n, double sigma, Prng& rng) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const auto bound = static_cast<std::int64_t>(std::floor(6 * sigma));
  const std::uint64_t width = static_cast<std::uint64_t>(2 * bound + 1);
  std::vector<double> accept(width);
  for (std::int64_t k = -bound; k <= bound; ++k) {
    accept[static_cast<std::size_t>(k + bound)] =
        std::exp(-static_cast<double>(k * k) / (2 * sigma * sigma));
  }
  std::vector<std::int64_t> out(n);
  for (auto& v : out) {
    while (true) {
      const std::uint64_t idx = rng.uniform_below(width);
      if (rng.uniform01() < accept[idx]) {
        v = static_cast<std::int64_t>(idx) - bound;
        break;
      }
    }
  }
  return out;
}

RingElement sample_ternary(const RingParamsPtr& params, Prng& rng) {
  const auto c = draw_ternary(params->n(), rng);
  return RingElement::from_signed(params, c);
}

RingElement sample_error(const RingParamsPtr& params, double sigma, Prng& rng) {
  const auto c = draw_gaussian(params->n(), sigma, rng);
  return RingElement::from_signed(params, c);
}

}  // namespace hecnn::polyring
