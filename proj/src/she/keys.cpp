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

#include "hecnn/she/keys.hpp"

#include "hecnn/common/errors.hpp"
#include "hecnn/polyring/sampling.hpp"

namespace hecnn::she {

using polyring::Form;
using polyring::RingElement;

namespace {

// Returns -(a*s + e) for fresh uniform a (both in evaluation form).
std::pair<RingElement, RingElement> rlwe_sample(const SecretKey& sk, Prng& rng) {
  const auto& ring = sk.ctx->ring();
  RingElement a = polyring::sample_uniform(ring, rng);
  a.to_evaluation();
  RingElement e = polyring::sample_error(ring, sk.ctx->params().sigma, rng);
  e.to_evaluation();
  RingElement b = polyring::ring_neg(polyring::ring_add(polyring::ring_mul(a, sk.s), e));
  return {std::move(b), std::move(a)};
}

}  // namespace

PublicKey make_public_key(const SecretKey& sk, Prng& rng) {
  auto [b, a] = rlwe_sample(sk, rng);
  return PublicKey{sk.ctx, std::move(b), std::move(a)};
}

RelinKeys make_relin_keys(const SecretKey& sk, Prng& rng) {
  const auto& ctx = *sk.ctx;
  const auto& ring = *ctx.ring();
  const RingElement s2 = polyring::ring_mul(sk.s, sk.s);
  const int w = ctx.params().relin_decomp_bits;
  RelinKeys rlk{sk.ctx, {}};
  rlk.keys.reserve(ctx.relin_key_count());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    // Gadget element 2^(w*l) * (q / q_i): zero modulo every other prime.
    const mpz_class qhat = ring.q() / to_mpz(ring.modulus(i).value());
    const std::uint64_t qhat_i = mod_u64(qhat, ring.modulus(i).value());
    for (int l = 0; l < ctx.digits_per_modulus(); ++l) {
      auto [b, a] = rlwe_sample(sk, rng);
      const polyring::Modulus& qi = ring.modulus(i);
      const std::uint64_t g = qi.mul(qhat_i, qi.pow(2, static_cast<std::uint64_t>(w * l)));
      auto bi = b.residue(i);
      auto si = s2.residue(i);
      for (std::size_t j = 0; j < bi.size(); ++j) bi[j] = qi.add(bi[j], qi.mul(g, si[j]));
      rlk.keys.emplace_back(std::move(b), std::move(a));
    }
  }
  return rlk;
}

KeySet keygen(const SheContextPtr& ctx, Prng& rng) {
  ctx->params().validate();
  SecretKey sk{ctx, polyring::sample_ternary(ctx->ring(), rng)};
  sk.s.to_evaluation();
  PublicKey pk = make_public_key(sk, rng);
  RelinKeys rlk = make_relin_keys(sk, rng);
  return KeySet{std::move(pk), std::move(sk), std::move(rlk)};
}

}  // namespace hecnn::she
