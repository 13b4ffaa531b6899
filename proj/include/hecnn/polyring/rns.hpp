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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hecnn/polyring/modarith.hpp"

namespace hecnn::polyring {

// Chinese-remainder data for a set of pairwise coprime word moduli.
class RnsBase {
 public:
  RnsBase() = default;
  explicit RnsBase(std::vector<Modulus> moduli);

  std::size_t size() const { return moduli_.size(); }
  const std::vector<Modulus>& moduli() const { return moduli_; }
  const Modulus& operator[](std::size_t i) const { return moduli_[i]; }
  const mpz_class& product() const { return product_; }
  // (product / m_i)^-1 mod m_i.
  std::uint64_t punctured_inv(std::size_t i) const { return punctured_inv_[i]; }

  // residues[i * stride] for i in [0, size) -> value in [0, product).
  void compose(const std::uint64_t* residues, std::size_t stride,
               mpz_class& out) const;
  // Same, but into the centered range (-product/2, product/2].
  void compose_centered(const std::uint64_t* residues, std::size_t stride,
                        mpz_class& out) const;
  // out[i * stride] = value mod moduli[i], any sign of value.
  void decompose(const mpz_class& value, std::uint64_t* out,
                 std::size_t stride) const;

 private:
  std::vector<Modulus> moduli_;
  mpz_class product_;
  mpz_class half_product_;
  std::vector<mpz_class> punctured_;         // product / m_i
  std::vector<std::uint64_t> punctured_inv_;  // (product / m_i)^-1 mod m_i
};

}  // namespace hecnn::polyring
