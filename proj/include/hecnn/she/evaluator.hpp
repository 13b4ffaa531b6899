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

#include <span>

#include <gmpxx.h>

#include "hecnn/she/ciphertext.hpp"
#include "hecnn/she/keys.hpp"

namespace hecnn::she {

// All operations check parameter identity and, for additions, equal scales.
Ciphertext eval_add(const Ciphertext& a, const Ciphertext& b);
Ciphertext eval_sub(const Ciphertext& a, const Ciphertext& b);
Ciphertext eval_negate(const Ciphertext& a);
void eval_add_inplace(Ciphertext& a, const Ciphertext& b);
Ciphertext eval_add_plain(const Ciphertext& a, const Plaintext& p);
void eval_add_plain_inplace(Ciphertext& a, const Plaintext& p);

// Constant plaintexts take a scalar fast path.
Ciphertext eval_mul_plain(const Ciphertext& a, const Plaintext& p);
// Multiplies by an integer taken modulo t (its centered representative is
// used so small negative weights stay small); scale becomes a.scale * scale.
Ciphertext eval_mul_scalar(const Ciphertext& a, const mpz_class& value,
                           const mpq_class& scale = 1);

// Tensor product without relinearization; output has a.size + b.size - 1 parts.
// sum_i [weights[i]]_t * inputs[i] without intermediate copies. All inputs
// share one scale; the result carries input scale * weight_scale.
Ciphertext eval_dot_scalar(std::span<const Ciphertext* const> inputs,
                           std::span<const mpz_class> weights,
                           const mpq_class& weight_scale = 1);
Ciphertext eval_mul_no_relin(const Ciphertext& a, const Ciphertext& b);
Ciphertext relinearize(const Ciphertext& a, const RelinKeys& rlk);
Ciphertext eval_mul(const Ciphertext& a, const Ciphertext& b, const RelinKeys& rlk);
Ciphertext eval_square(const Ciphertext& a, const RelinKeys& rlk);

}  // namespace hecnn::she
