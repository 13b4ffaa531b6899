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

#include "hecnn/she/batch_encoder.hpp"

#include "hecnn/common/errors.hpp"

namespace hecnn::she {

Plaintext BatchEncoder::encode(std::span<const u128> values) const {
  const std::size_t n = ctx_->n();
  if (values.size() > n) {
    throw crypto_error("too many values for " + std::to_string(n) + " slots");
  }
  std::vector<u128> slots(n, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= ctx_->t().value()) {
      throw crypto_error("slot value is not reduced modulo t");
    }
    slots[i] = values[i];
  }
  ctx_->plain_ntt().inverse(slots);
  Plaintext pt;
  pt.coeffs = std::move(slots);
  return pt;
}

Plaintext BatchEncoder::encode_signed(std::span<const std::int64_t> values) const {
  std::vector<u128> reduced(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    reduced[i] = ctx_->t().from_signed(values[i]);
  }
  return encode(reduced);
}

Plaintext BatchEncoder::encode_mpz(std::span<const mpz_class> values) const {
  std::vector<u128> reduced(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    reduced[i] = ctx_->t().reduce(values[i]);
  }
  return encode(reduced);
}

std::vector<u128> BatchEncoder::decode(const Plaintext& pt) const {
  if (pt.coeffs.size() != ctx_->n()) throw crypto_error("plaintext length mismatch");
  std::vector<u128> slots = pt.coeffs;
  ctx_->plain_ntt().forward(slots);
  return slots;
}

std::vector<mpz_class> BatchEncoder::decode_centered(const Plaintext& pt) const {
  const auto slots = decode(pt);
  std::vector<mpz_class> out(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) out[i] = ctx_->t().centered(slots[i]);
  return out;
}

Plaintext BatchEncoder::constant(const mpz_class& value) const {
  Plaintext pt(ctx_->n());
  pt.coeffs[0] = ctx_->t().reduce(value);
  return pt;
}

}  // namespace hecnn::she
