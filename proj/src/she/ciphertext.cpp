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

#include "hecnn/she/ciphertext.hpp"

#include "hecnn/common/errors.hpp"

namespace hecnn::she {

bool Plaintext::is_constant() const {
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0) return false;
  }
  return true;
}

Ciphertext::Ciphertext(SheContextPtr ctx, std::size_t part_count)
    : ctx_(std::move(ctx)) {
  if (part_count < 2) throw crypto_error("a ciphertext needs at least two parts");
  parts_.reserve(part_count);
  for (std::size_t i = 0; i < part_count; ++i) parts_.emplace_back(ctx_->ring());
}

void Ciphertext::set_scale(const mpq_class& s) {
  if (s <= 0) throw crypto_error("ciphertext scale must be positive");
  scale_ = s;
  scale_.canonicalize();
}

bool Ciphertext::operator==(const Ciphertext& o) const {
  return params_id() == o.params_id() && scale_ == o.scale_ && parts_ == o.parts_;
}

}  // namespace hecnn::she
