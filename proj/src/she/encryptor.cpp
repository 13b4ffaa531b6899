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

#include "hecnn/she/encryptor.hpp"

#include "hecnn/common/errors.hpp"
#include "hecnn/polyring/sampling.hpp"

namespace hecnn::she {

using polyring::RingElement;

Ciphertext encrypt(const PublicKey& pk, const Plaintext& pt, Prng& rng) {
  const auto& ctx = *pk.ctx;
  const auto& ring = ctx.ring();
  if (pt.coeffs.size() != ctx.n()) {
    throw crypto_error("plaintext length does not match ring degree");
  }
  RingElement u = polyring::sample_ternary(ring, rng);
  u.to_evaluation();
  RingElement c0 = polyring::ring_mul(pk.p0, u);
  RingElement c1 = polyring::ring_mul(pk.p1, u);
  c0.to_coefficient();
  c1.to_coefficient();
  const double sigma = ctx.params().sigma;
  polyring::add_inplace(c0, polyring::sample_error(ring, sigma, rng));
  polyring::add_inplace(c1, polyring::sample_error(ring, sigma, rng));
  for (std::size_t i = 0; i < ring->size(); ++i) {
    const auto& qi = ring->modulus(i);
    const std::uint64_t d = ctx.delta()[i];
    auto r = c0.residue(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (pt.coeffs[j] >= ctx.t().value()) {
        throw crypto_error("plaintext coefficient is not reduced modulo t");
      }
      const auto m = static_cast<std::uint64_t>(pt.coeffs[j] % qi.value());
      r[j] = qi.add(r[j], qi.mul(m, d));
    }
  }
  Ciphertext ct(pk.ctx, 2);
  ct[0] = std::move(c0);
  ct[1] = std::move(c1);
  ct.set_scale(pt.scale);
  return ct;
}

}  // namespace hecnn::she
