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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hecnn/common/bigint.hpp"
#include "hecnn/polyring/modarith.hpp"
#include "hecnn/polyring/ntt.hpp"

namespace hecnn::she {

inline constexpr int kMaxPlainBits = 126;

// Plaintext modulus t < 2^126. Values below 2^62 reuse the word-sized
// Barrett path; wider moduli go through two-limb GMP arithmetic.
class PlainModulus {
 public:
  PlainModulus() = default;
  explicit PlainModulus(u128 value);

  u128 value() const { return value_; }
  int bit_count() const { return bits_; }
  bool is_word() const { return word_.has_value(); }
  const polyring::Modulus& word() const { return *word_; }
  mpz_class as_mpz() const { return to_mpz(value_); }

  u128 add(u128 a, u128 b) const {
    const u128 s = a + b;
    return (s >= value_ || s < a) ? s - value_ : s;
  }
  u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + (value_ - b); }
  u128 neg(u128 a) const { return a == 0 ? 0 : value_ - a; }
  u128 mul(u128 a, u128 b) const;
  u128 pow(u128 base, u128 exp) const;
  u128 inv(u128 a) const;
  u128 reduce(const mpz_class& v) const;
  // Centered representative in (-t/2, t/2].
  mpz_class centered(u128 a) const;
  u128 from_signed(std::int64_t v) const;

 private:
  u128 value_ = 0;
  int bits_ = 0;
  std::optional<polyring::Modulus> word_;
};

bool is_prime_u128(u128 v);

// Largest prime below 2^bits with p = 1 mod congruence.
u128 find_plain_prime(int bits, std::uint64_t congruence);

// Negacyclic NTT modulo t, the slot isomorphism used for batching.
class PlainNtt {
 public:
  PlainNtt(std::size_t n, const PlainModulus& t);

  void forward(std::vector<u128>& a) const;
  void inverse(std::vector<u128>& a) const;

 private:
  std::size_t n_;
  PlainModulus t_;
  std::optional<polyring::NttTables> word_ntt_;
  std::vector<u128> psi_rev_, inv_psi_rev_;
  u128 inv_n_ = 0;
};

}  // namespace hecnn::she
