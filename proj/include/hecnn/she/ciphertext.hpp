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
#include <vector>

#include "hecnn/common/bigint.hpp"
#include "hecnn/polyring/ring.hpp"
#include "hecnn/she/params.hpp"

namespace hecnn::she {

// A message polynomial with coefficients in [0, t) and a logical scale.
struct Plaintext {
  std::vector<u128> coeffs;
  mpq_class scale = 1;

  Plaintext() = default;
  explicit Plaintext(std::size_t n) : coeffs(n, 0) {}

  // True when only the constant coefficient may be nonzero; such a
  // plaintext decodes to the same value in every slot.
  bool is_constant() const;
  bool operator==(const Plaintext& o) const {
    return coeffs == o.coeffs && scale == o.scale;
  }
};

// Coefficient-form ciphertext parts over the context's ring.
class Ciphertext {
 public:
  Ciphertext() = default;
  Ciphertext(SheContextPtr ctx, std::size_t part_count);

  const SheContextPtr& context() const { return ctx_; }
  std::uint64_t params_id() const { return ctx_ ? ctx_->params_id() : 0; }
  std::size_t size() const { return parts_.size(); }
  polyring::RingElement& operator[](std::size_t i) { return parts_[i]; }
  const polyring::RingElement& operator[](std::size_t i) const { return parts_[i]; }
  std::vector<polyring::RingElement>& parts() { return parts_; }
  const std::vector<polyring::RingElement>& parts() const { return parts_; }

  const mpq_class& scale() const { return scale_; }
  void set_scale(const mpq_class& s);

  bool operator==(const Ciphertext& o) const;

 private:
  SheContextPtr ctx_;
  std::vector<polyring::RingElement> parts_;
  mpq_class scale_ = 1;
};

}  // namespace hecnn::she
