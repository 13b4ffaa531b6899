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

#include "hecnn/polyring/rns.hpp"

#include <stdexcept>

namespace hecnn::polyring {

RnsBase::RnsBase(std::vector<Modulus> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw std::invalid_argument("empty RNS base");
  product_ = 1;
  for (const auto& m : moduli_) product_ *= to_mpz(m.value());
  half_product_ = product_ >> 1;
  for (const auto& m : moduli_) {
    mpz_class punctured = product_ / to_mpz(m.value());
    const std::uint64_t residue = mod_u64(punctured, m.value());
    if (residue == 0) {
      throw std::invalid_argument("RNS moduli are not pairwise coprime");
    }
    punctured_inv_.push_back(m.inv(residue));
    punctured_.push_back(std::move(punctured));
  }
}

void RnsBase::compose(const std::uint64_t* residues, std::size_t stride,
                      mpz_class& out) const {
  out = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::uint64_t y = moduli_[i].mul(residues[i * stride], punctured_inv_[i]);
    mpz_addmul_ui(out.get_mpz_t(), punctured_[i].get_mpz_t(), y);
  }
  // out < size * product; a few subtractions beat a division for small bases.
  while (out >= product_) out -= product_;
}

void RnsBase::compose_centered(const std::uint64_t* residues,
                               std::size_t stride, mpz_class& out) const {
  compose(residues, stride, out);
  if (out > half_product_) out -= product_;
}

void RnsBase::decompose(const mpz_class& value, std::uint64_t* out,
                        std::size_t stride) const {
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    out[i * stride] = mpz_fdiv_ui(value.get_mpz_t(), moduli_[i].value());
  }
}

}  // namespace hecnn::polyring
