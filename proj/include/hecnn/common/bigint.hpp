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

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hecnn {

using u128 = unsigned __int128;

inline mpz_class to_mpz(u128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

inline mpz_class to_mpz(std::uint64_t v) {
  return mpz_class(static_cast<unsigned long>(v));
}

// Requires 0 <= v < 2^128.
inline u128 to_u128(const mpz_class& v) {
  mpz_class lo = v & mpz_class("18446744073709551615");
  mpz_class hi = v >> 64;
  return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

inline std::string to_string(u128 v) { return to_mpz(v).get_str(); }

inline int bit_length(const mpz_class& v) {
  return v == 0 ? 0 : static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

// Reduces v into [0, m) for any sign of v.
inline std::uint64_t mod_u64(const mpz_class& v, std::uint64_t m) {
  return mpz_fdiv_ui(v.get_mpz_t(), m);
}

}  // namespace hecnn
