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
#include <vector>

#include "hecnn/common/bigint.hpp"

namespace hecnn::polyring {

// A word-sized modulus 2 <= p < 2^62 with a precomputed Barrett constant.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(std::uint64_t value);

  std::uint64_t value() const { return value_; }
  int bit_count() const { return bit_count_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + value_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : value_ - a; }

  // Reduces a 128-bit value with Barrett's method.
  std::uint64_t reduce(u128 x) const {
    const std::uint64_t lo = static_cast<std::uint64_t>(x);
    const std::uint64_t hi = static_cast<std::uint64_t>(x >> 64);
    const u128 a = static_cast<u128>(lo) * ratio_lo_;
    const u128 b = static_cast<u128>(lo) * ratio_hi_;
    const u128 c = static_cast<u128>(hi) * ratio_lo_;
    const u128 mid = (a >> 64) + static_cast<std::uint64_t>(b) +
                     static_cast<std::uint64_t>(c);
    const std::uint64_t q = hi * ratio_hi_ + static_cast<std::uint64_t>(b >> 64) +
                            static_cast<std::uint64_t>(c >> 64) +
                            static_cast<std::uint64_t>(mid >> 64);
    std::uint64_t r = lo - q * value_;
    if (r >= value_) r -= value_;
    if (r >= value_) r -= value_;
    return r;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce(static_cast<u128>(a) * b);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  // Inverse of a unit; throws if a is not invertible.
  std::uint64_t inv(std::uint64_t a) const;

  // Maps a signed integer into [0, p).
  std::uint64_t from_signed(std::int64_t v) const {
    if (v >= 0) return static_cast<std::uint64_t>(v) % value_;
    std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) % value_;
    return value_ - 1 - m;
  }

  bool operator==(const Modulus& o) const { return value_ == o.value_; }

 private:
  std::uint64_t value_ = 0;
  int bit_count_ = 0;
  std::uint64_t ratio_hi_ = 0;
  std::uint64_t ratio_lo_ = 0;
};

// floor(w * 2^64 / p), the Shoup companion of a fixed multiplicand w < p.
inline std::uint64_t shoup_precompute(std::uint64_t w, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / p);
}

// a * w mod p in [0, 2p); any a < 2^64.
inline std::uint64_t mul_shoup_lazy(std::uint64_t a, std::uint64_t w,
                                    std::uint64_t w_shoup, std::uint64_t p) {
  std::uint64_t q = static_cast<std::uint64_t>(
      (static_cast<u128>(a) * w_shoup) >> 64);
  return a * w - q * p;
}

inline std::uint64_t mul_shoup(std::uint64_t a, std::uint64_t w,
                               std::uint64_t w_shoup, std::uint64_t p) {
  std::uint64_t r = mul_shoup_lazy(a, w, w_shoup, p);
  return r >= p ? r - p : r;
}

bool is_prime(std::uint64_t n);

// Largest `count` primes p < 2^bits with p = 1 mod `congruence`, excluding any
// listed in `exclude`, in descending order.
std::vector<std::uint64_t> find_primes_congruent_one(
    int bits, std::uint64_t congruence, std::size_t count,
    const std::vector<std::uint64_t>& exclude = {});

// Smallest psi (in search order of generators 2,3,...) with psi^(m/2) = -1,
// i.e. a primitive m-th root of unity mod p. Requires m | p-1, m even.
std::uint64_t primitive_root_of_unity(std::uint64_t m, const Modulus& p);

}  // namespace hecnn::polyring
