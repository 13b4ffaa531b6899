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
#include <vector>

#include "hecnn/polyring/modarith.hpp"

namespace hecnn::polyring {

// Negacyclic number-theoretic transform over Z_p[x]/(x^n + 1), p = 1 mod 2n.
// forward() takes natural coefficient order to bit-reversed evaluation order;
// inverse() undoes it. Pointwise products in the transformed domain are
// negacyclic convolutions.
class NttTables {
 public:
  NttTables(std::size_t n, const Modulus& modulus);

  std::size_t n() const { return n_; }
  const Modulus& modulus() const { return modulus_; }
  // The primitive 2n-th root of unity used for the transform.
  std::uint64_t psi() const { return psi_; }

  void forward(std::uint64_t* a) const;
  void inverse(std::uint64_t* a) const;

 private:
  std::size_t n_;
  Modulus modulus_;
  std::uint64_t psi_;
  std::vector<std::uint64_t> psi_rev_, psi_rev_shoup_;
  std::vector<std::uint64_t> inv_psi_rev_, inv_psi_rev_shoup_;
  std::uint64_t inv_n_, inv_n_shoup_;
};

inline std::size_t reverse_bits(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace hecnn::polyring
