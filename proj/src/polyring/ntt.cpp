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

#include "hecnn/polyring/ntt.hpp"

#include <stdexcept>

namespace hecnn::polyring {

NttTables::NttTables(std::size_t n, const Modulus& modulus)
    : n_(n), modulus_(modulus) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("NTT size must be a power of two >= 2");
  }
  const std::uint64_t p = modulus.value();
  psi_ = primitive_root_of_unity(2 * n, modulus);
  const std::uint64_t inv_psi = modulus.inv(psi_);
  int log_n = 0;
  while ((std::size_t{1} << log_n) < n) ++log_n;

  psi_rev_.resize(n);
  inv_psi_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  inv_psi_rev_shoup_.resize(n);
  std::uint64_t pw = 1, ipw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = reverse_bits(i, log_n);
    psi_rev_[r] = pw;
    inv_psi_rev_[r] = ipw;
    pw = modulus.mul(pw, psi_);
    ipw = modulus.mul(ipw, inv_psi);
  }
  for (std::size_t i = 0; i < n; ++i) {
    psi_rev_shoup_[i] = shoup_precompute(psi_rev_[i], p);
    inv_psi_rev_shoup_[i] = shoup_precompute(inv_psi_rev_[i], p);
  }
  inv_n_ = modulus.inv(n % p);
  inv_n_shoup_ = shoup_precompute(inv_n_, p);
}

void NttTables::forward(std::uint64_t* a) const {
  const std::uint64_t p = modulus_.value();
  const std::uint64_t two_p = 2 * p;
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const std::uint64_t w = psi_rev_[m + i];
      const std::uint64_t ws = psi_rev_shoup_[m + i];
      std::uint64_t* x = a + j1;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        std::uint64_t u = x[j];
        if (u >= two_p) u -= two_p;
        const std::uint64_t v = mul_shoup_lazy(y[j], w, ws, p);
        x[j] = u + v;
        y[j] = u + two_p - v;
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    std::uint64_t v = a[i];
    if (v >= two_p) v -= two_p;
    if (v >= p) v -= p;
    a[i] = v;
  }
}

void NttTables::inverse(std::uint64_t* a) const {
  const std::uint64_t p = modulus_.value();
  const std::uint64_t two_p = 2 * p;
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = inv_psi_rev_[h + i];
      const std::uint64_t ws = inv_psi_rev_shoup_[h + i];
      std::uint64_t* x = a + j1;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t u = x[j];
        const std::uint64_t v = y[j];
        std::uint64_t s = u + v;
        if (s >= two_p) s -= two_p;
        x[j] = s;
        y[j] = mul_shoup_lazy(u + two_p - v, w, ws, p);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    a[i] = mul_shoup(a[i], inv_n_, inv_n_shoup_, p);
  }
}

}  // namespace hecnn::polyring
