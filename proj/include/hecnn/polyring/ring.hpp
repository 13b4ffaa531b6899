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
#include <memory>
#include <span>
#include <vector>

#include "hecnn/polyring/modarith.hpp"
#include "hecnn/polyring/ntt.hpp"
#include "hecnn/polyring/rns.hpp"

namespace hecnn::polyring {

class RingParams;
using RingParamsPtr = std::shared_ptr<const RingParams>;

// The ring Z_q[x]/(x^n + 1) with q held as a product of word-sized coprime
// moduli. When every modulus is a prime = 1 mod 2n, multiplication runs
// through per-prime NTTs; otherwise it falls back to schoolbook convolution.
class RingParams {
 public:
  static RingParamsPtr create(std::size_t n, std::vector<std::uint64_t> moduli);

  std::size_t n() const { return n_; }
  int log_n() const { return log_n_; }
  const RnsBase& base() const { return base_; }
  std::size_t size() const { return base_.size(); }
  const Modulus& modulus(std::size_t i) const { return base_[i]; }
  const mpz_class& q() const { return base_.product(); }
  bool ntt_enabled() const { return !ntt_.empty(); }
  const NttTables& ntt(std::size_t i) const { return ntt_[i]; }

  bool operator==(const RingParams& o) const;

 private:
  RingParams(std::size_t n, RnsBase base);

  std::size_t n_;
  int log_n_;
  RnsBase base_;
  std::vector<NttTables> ntt_;
};

bool same_ring(const RingParamsPtr& a, const RingParamsPtr& b);

enum class Form { kCoefficient, kEvaluation };

// An element of R_q stored residue-major: residue(i)[j] is coefficient j
// (or evaluation j) modulo q_i. Every stored residue is reduced.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(RingParamsPtr params, Form form = Form::kCoefficient);

  // From centered or arbitrary signed integer coefficients (length n).
  static RingElement from_signed(RingParamsPtr params,
                                 std::span<const std::int64_t> coeffs);
  static RingElement from_bigints(RingParamsPtr params,
                                  std::span<const mpz_class> coeffs);

  const RingParamsPtr& params() const { return params_; }
  std::size_t n() const { return params_->n(); }
  Form form() const { return form_; }
  bool empty() const { return params_ == nullptr; }

  std::span<std::uint64_t> residue(std::size_t i) {
    return {data_.data() + i * params_->n(), params_->n()};
  }
  std::span<const std::uint64_t> residue(std::size_t i) const {
    return {data_.data() + i * params_->n(), params_->n()};
  }
  std::vector<std::uint64_t>& data() { return data_; }
  const std::vector<std::uint64_t>& data() const { return data_; }

  // Coefficient j as an integer in [0, q); coefficient form only.
  mpz_class coeff(std::size_t j) const;
  mpz_class coeff_centered(std::size_t j) const;
  std::vector<mpz_class> to_bigints() const;
  void set_coeff(std::size_t j, const mpz_class& value);

  void to_evaluation();
  void to_coefficient();

  bool is_zero() const;
  bool operator==(const RingElement& o) const;

 private:
  RingParamsPtr params_;
  Form form_ = Form::kCoefficient;
  std::vector<std::uint64_t> data_;
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
RingElement ring_neg(const RingElement& a);
// Negacyclic product. Both operands must share a form; coefficient-form
// inputs are transformed internally when NTT is available.
RingElement ring_mul(const RingElement& a, const RingElement& b);
// O(n^2) negacyclic convolution per modulus; coefficient form only.
RingElement ring_mul_schoolbook(const RingElement& a, const RingElement& b);
RingElement ring_mul_scalar(const RingElement& a, const mpz_class& scalar);

void add_inplace(RingElement& a, const RingElement& b);
void sub_inplace(RingElement& a, const RingElement& b);
// a += b * c with b, c in evaluation form.
void multiply_accumulate(RingElement& a, const RingElement& b,
                         const RingElement& c);
// Multiplies by a scalar given as its residues mod each q_i.
// acc += a * scalar, with one reduced scalar per RNS residue. Both operands
// must share the same form.
void mul_scalar_accumulate(RingElement& acc, const RingElement& a,
                           std::span<const std::uint64_t> scalar);
void mul_scalar_inplace(RingElement& a, std::span<const std::uint64_t> scalar);

}  // namespace hecnn::polyring
