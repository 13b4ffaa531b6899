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
#include <vector>

#include "hecnn/common/bigint.hpp"
#include "hecnn/polyring/ring.hpp"
#include "hecnn/she/plain_modulus.hpp"

namespace hecnn::she {

// Base conversions for ciphertext multiplication. The tensor product is
// computed exactly in the joint base Q u P, where P is an auxiliary base
// wide enough to hold both the tensor and round(t * tensor / Q). Rounding
// uses 128-bit fixed-point fractions, so results match exact big-integer
// arithmetic except with negligible probability.
class RnsTool {
 public:
  RnsTool(polyring::RingParamsPtr q_ring, const PlainModulus& t);

  const polyring::RingParamsPtr& q_ring() const { return q_ring_; }
  const polyring::RingParamsPtr& p_ring() const { return p_ring_; }

  // Residues of the centered lift of `x` (coefficient form, base Q) in
  // base P. out must hold |P| * n words, residue-major.
  void lift_to_p(const polyring::RingElement& x, std::uint64_t* out) const;

  // Given the coefficient-form residues of e in Q (e_q) and P (e_p), with e
  // centered in (-QP/2, QP/2), writes round(t * e / Q) mod Q into out.
  void scale_and_round(const std::uint64_t* e_q, const std::uint64_t* e_p,
                       polyring::RingElement& out) const;

 private:
  polyring::RingParamsPtr q_ring_, p_ring_;
  std::size_t k_, m_, n_;

  // Q -> P centered lift.
  std::vector<std::uint64_t> qhat_inv_;      // (Q/q_i)^-1 mod q_i
  std::vector<std::uint64_t> qhat_mod_p_;    // [i * m + j] = Q/q_i mod p_j
  std::vector<std::uint64_t> q_mod_p_;       // Q mod p_j
  std::vector<long double> inv_q_;

  // Scale and round.
  std::vector<std::uint64_t> qphat_inv_q_;   // (QP/q_i)^-1 mod q_i
  std::vector<std::uint64_t> qphat_inv_p_;   // (QP/p_j)^-1 mod p_j
  std::vector<std::uint64_t> int_part_;      // [i * m + j] = floor(tP/q_i) mod p_j
  std::vector<u128> frac_;                   // floor(frac(tP/q_i) * 2^128)
  std::vector<std::uint64_t> tphat_mod_p_;   // tP/p_j mod p_j

  // P -> Q centered conversion.
  std::vector<std::uint64_t> phat_inv_;      // (P/p_j)^-1 mod p_j
  std::vector<std::uint64_t> phat_mod_q_;    // [j * k + i] = P/p_j mod q_i
  std::vector<std::uint64_t> p_mod_q_;       // P mod q_i
  std::vector<long double> inv_p_;
};

}  // namespace hecnn::she
