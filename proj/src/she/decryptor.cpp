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

#include "hecnn/she/decryptor.hpp"

#include <cmath>

#include "hecnn/common/errors.hpp"

namespace hecnn::she {

using polyring::RingElement;

DecryptResult decrypt_checked(const SecretKey& sk, const Ciphertext& ct) {
  if (!ct.context() || ct.params_id() != sk.ctx->params_id()) {
    throw crypto_error("secret key does not match ciphertext parameters");
  }
  if (ct.size() < 2) throw crypto_error("ciphertext has fewer than two parts");
  const auto& ctx = *sk.ctx;
  const auto& ring = ctx.ring();

  // x = sum_i c_i * s^i, accumulated in evaluation form.
  RingElement acc = ct[0];
  acc.to_evaluation();
  RingElement s_pow = sk.s;
  for (std::size_t i = 1; i < ct.size(); ++i) {
    RingElement ci = ct[i];
    ci.to_evaluation();
    polyring::multiply_accumulate(acc, ci, s_pow);
    if (i + 1 < ct.size()) s_pow = polyring::ring_mul(s_pow, sk.s);
  }
  acc.to_coefficient();

  const mpz_class& q = ring->q();
  const mpz_class half_q = q >> 1;
  const mpz_class t = ctx.t().as_mpz();
  DecryptResult out;
  out.plain = Plaintext(ctx.n());
  out.plain.scale = ct.scale();
  mpz_class x, tx, v, m, max_noise = 0;
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    ring->base().compose(acc.data().data() + j, ctx.n(), x);
    tx = t * x;
    mpz_fdiv_r(v.get_mpz_t(), tx.get_mpz_t(), q.get_mpz_t());
    if (v > half_q) v -= q;
    m = (tx - v) / q;
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), t.get_mpz_t());
    out.plain.coeffs[j] = to_u128(m);
    if (abs(v) > max_noise) max_noise = abs(v);
  }
  if (max_noise == 0) {
    out.noise_budget = bit_length(q) - 2;
  } else {
    // floor(log2(q / (2 |v|))): largest b with 2^b * 2|v| <= q.
    const mpz_class twice = 2 * max_noise;
    int b = bit_length(q) - bit_length(twice);
    if (b > 0 && (twice << b) > q) --b;
    out.noise_budget = std::max(b, 0);
  }
  out.ok = out.noise_budget > 0;
  return out;
}

Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct) {
  DecryptResult r = decrypt_checked(sk, ct);
  if (!r.ok) throw crypto_error("noise budget exhausted; decryption is unreliable");
  return std::move(r.plain);
}

int noise_budget(const SecretKey& sk, const Ciphertext& ct) {
  return decrypt_checked(sk, ct).noise_budget;
}

}  // namespace hecnn::she
