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

#include "hecnn/she/plain_modulus.hpp"

#include <gmp.h>

#include <stdexcept>

namespace hecnn::she {

namespace {

int bits_of(u128 v) {
  int b = 0;
  while (v != 0) {
    ++b;
    v >>= 1;
  }
  return b;
}

}  // namespace

PlainModulus::PlainModulus(u128 value) : value_(value), bits_(bits_of(value)) {
  if (value < 2 || bits_ > kMaxPlainBits) {
    throw std::invalid_argument("plaintext modulus must lie in [2, 2^126)");
  }
  if (bits_ <= 62) word_.emplace(static_cast<std::uint64_t>(value));
}

u128 PlainModulus::mul(u128 a, u128 b) const {
  if (word_) {
    return word_->mul(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }
  mp_limb_t x[2] = {static_cast<mp_limb_t>(a), static_cast<mp_limb_t>(a >> 64)};
  mp_limb_t y[2] = {static_cast<mp_limb_t>(b), static_cast<mp_limb_t>(b >> 64)};
  mp_limb_t m[2] = {static_cast<mp_limb_t>(value_),
                    static_cast<mp_limb_t>(value_ >> 64)};
  mp_limb_t prod[4], quot[4], rem[2] = {0, 0};
  mpn_mul_n(prod, x, y, 2);
  const mp_size_t dn = m[1] != 0 ? 2 : 1;
  mpn_tdiv_qr(quot, rem, 0, prod, 4, m, dn);
  return (static_cast<u128>(rem[1]) << 64) | rem[0];
}

u128 PlainModulus::pow(u128 base, u128 exp) const {
  u128 result = 1 % value_;
  base %= value_;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

u128 PlainModulus::inv(u128 a) const {
  mpz_class r, x = to_mpz(a), m = as_mpz();
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::domain_error("value is not invertible modulo t");
  }
  return to_u128(r);
}

u128 PlainModulus::reduce(const mpz_class& v) const {
  mpz_class r, m = as_mpz();
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return to_u128(r);
}

mpz_class PlainModulus::centered(u128 a) const {
  mpz_class v = to_mpz(a);
  if (a > value_ / 2) v -= as_mpz();
  return v;
}

u128 PlainModulus::from_signed(std::int64_t v) const {
  if (v >= 0) return static_cast<u128>(v) % value_;
  const u128 m = static_cast<u128>(-(v + 1)) % value_;
  return value_ - 1 - m;
}

bool is_prime_u128(u128 v) {
  if (v < (static_cast<u128>(1) << 64)) {
    return polyring::is_prime(static_cast<std::uint64_t>(v));
  }
  mpz_class z = to_mpz(v);
  return mpz_probab_prime_p(z.get_mpz_t(), 50) != 0;
}

u128 find_plain_prime(int bits, std::uint64_t congruence) {
  if (bits < 2 || bits > kMaxPlainBits) {
    throw std::invalid_argument("plaintext modulus bit size out of range");
  }
  const u128 top = (static_cast<u128>(1) << bits) - 1;
  u128 p = top - (top % congruence) + 1;
  if (p > top) p -= congruence;
  const u128 floor_value = static_cast<u128>(1) << (bits - 1);
  for (; p > floor_value; p -= congruence) {
    if (is_prime_u128(p)) return p;
  }
  throw std::runtime_error("no suitable plaintext prime found");
}

PlainNtt::PlainNtt(std::size_t n, const PlainModulus& t) : n_(n), t_(t) {
  if ((t.value() - 1) % (2 * n) != 0 || !is_prime_u128(t.value())) {
    throw std::invalid_argument("t must be a prime congruent to 1 mod 2n for batching");
  }
  if (t.is_word()) {
    word_ntt_.emplace(n, t.word());
    return;
  }
  // Find a primitive 2n-th root of unity.
  const u128 tm1 = t.value() - 1;
  u128 psi = 0;
  for (u128 g = 2;; ++g) {
    psi = t.pow(g, tm1 / (2 * n));
    if (t.pow(psi, n) == tm1) break;
  }
  const u128 inv_psi = t.inv(psi);
  int log_n = 0;
  while ((std::size_t{1} << log_n) < n) ++log_n;
  psi_rev_.resize(n);
  inv_psi_rev_.resize(n);
  u128 pw = 1, ipw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = polyring::reverse_bits(i, log_n);
    psi_rev_[r] = pw;
    inv_psi_rev_[r] = ipw;
    pw = t.mul(pw, psi);
    ipw = t.mul(ipw, inv_psi);
  }
  inv_n_ = t.inv(n);
}

void PlainNtt::forward(std::vector<u128>& a) const {
  if (word_ntt_) {
    std::vector<std::uint64_t> w(a.begin(), a.end());
    word_ntt_->forward(w.data());
    for (std::size_t i = 0; i < n_; ++i) a[i] = w[i];
    return;
  }
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const u128 s = psi_rev_[m + i];
      const std::size_t j1 = 2 * i * t;
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u128 u = a[j];
        const u128 v = t_.mul(a[j + t], s);
        a[j] = t_.add(u, v);
        a[j + t] = t_.sub(u, v);
      }
    }
  }
}

void PlainNtt::inverse(std::vector<u128>& a) const {
  if (word_ntt_) {
    std::vector<std::uint64_t> w(a.begin(), a.end());
    word_ntt_->inverse(w.data());
    for (std::size_t i = 0; i < n_; ++i) a[i] = w[i];
    return;
  }
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const u128 s = inv_psi_rev_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u128 u = a[j];
        const u128 v = a[j + t];
        a[j] = t_.add(u, v);
        a[j + t] = t_.mul(t_.sub(u, v), s);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& v : a) v = t_.mul(v, inv_n_);
}

}  // namespace hecnn::she
