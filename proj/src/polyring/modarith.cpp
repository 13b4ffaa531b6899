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

#include "hecnn/polyring/modarith.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hecnn::polyring {

Modulus::Modulus(std::uint64_t value) : value_(value) {
  if (value < 2 || value >= (std::uint64_t{1} << 62)) {
    throw std::invalid_argument("modulus must lie in [2, 2^62), got " +
                                std::to_string(value));
  }
  bit_count_ = 64 - __builtin_clzll(value);
  const u128 ratio = ~static_cast<u128>(0) / value;
  ratio_lo_ = static_cast<std::uint64_t>(ratio);
  ratio_hi_ = static_cast<std::uint64_t>(ratio >> 64);
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t exp) const {
  std::uint64_t result = 1 % value_;
  base %= value_;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t Modulus::inv(std::uint64_t a) const {
  // Extended Euclid on signed 128-bit to dodge overflow.
  __int128 r0 = value_, r1 = a % value_;
  __int128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
  }
  if (r0 != 1) {
    throw std::invalid_argument("value " + std::to_string(a) +
                                " is not invertible mod " +
                                std::to_string(value_));
  }
  if (s0 < 0) s0 += value_;
  return static_cast<std::uint64_t>(s0);
}

namespace {

std::uint64_t mulmod_any(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_any(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_any(r, b, m);
    b = mulmod_any(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_any(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_any(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> find_primes_congruent_one(
    int bits, std::uint64_t congruence, std::size_t count,
    const std::vector<std::uint64_t>& exclude) {
  if (bits < 2 || bits > 62) {
    throw std::invalid_argument("prime bit size must be in [2, 62]");
  }
  std::vector<std::uint64_t> out;
  const std::uint64_t upper = (std::uint64_t{1} << bits) - 1;
  const std::uint64_t lower = std::uint64_t{1} << (bits - 1);
  std::uint64_t candidate = upper - (upper - 1) % congruence;
  while (out.size() < count) {
    if (candidate < lower || candidate <= congruence) {
      throw std::invalid_argument("not enough " + std::to_string(bits) +
                                  "-bit primes congruent to 1 mod " +
                                  std::to_string(congruence));
    }
    if (is_prime(candidate) &&
        std::find(exclude.begin(), exclude.end(), candidate) == exclude.end()) {
      out.push_back(candidate);
    }
    candidate -= congruence;
  }
  return out;
}

std::uint64_t primitive_root_of_unity(std::uint64_t m, const Modulus& p) {
  const std::uint64_t pv = p.value();
  if (m < 2 || (pv - 1) % m != 0) {
    throw std::invalid_argument("no primitive " + std::to_string(m) +
                                "-th root of unity mod " + std::to_string(pv));
  }
  for (std::uint64_t g = 2; g < pv; ++g) {
    std::uint64_t psi = p.pow(g, (pv - 1) / m);
    if (p.pow(psi, m / 2) == pv - 1) return psi;
  }
  throw std::invalid_argument("primitive root search failed");
}

}  // namespace hecnn::polyring
