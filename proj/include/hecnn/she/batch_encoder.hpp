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
#include <span>
#include <vector>

#include "hecnn/she/ciphertext.hpp"
#include "hecnn/she/params.hpp"

namespace hecnn::she {

// Packs up to n values mod t into slots; slot arithmetic is elementwise.
class BatchEncoder {
 public:
  explicit BatchEncoder(SheContextPtr ctx) : ctx_(std::move(ctx)) {}

  std::size_t slot_count() const { return ctx_->n(); }
  // Missing trailing slots are zero.
  Plaintext encode(std::span<const u128> values) const;
  Plaintext encode_signed(std::span<const std::int64_t> values) const;
  Plaintext encode_mpz(std::span<const mpz_class> values) const;
  std::vector<u128> decode(const Plaintext& pt) const;
  // Centered slot values in (-t/2, t/2].
  std::vector<mpz_class> decode_centered(const Plaintext& pt) const;
  // Same value in every slot, represented by its constant coefficient.
  Plaintext constant(const mpz_class& value) const;

 private:
  SheContextPtr ctx_;
};

}  // namespace hecnn::she
