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

#include "hecnn/she/rns_tool.hpp"

#include <cmath>
#include <stdexcept>

namespace hecnn::she {

using polyring::Modulus;
using polyring::RingElement;

namespace {

// Sum of y_i * c_ij reduced modulo p; k is small so the lazy u128
// accumulation cannot overflow for 62-bit operands.
inline std::uint64_t dot_mod(const std::uint64_t* y, const std::uint64_t* c,
                             std::size_t count, std::size_t stride,
                             const Modulus& p) {
  u128 acc = 0;
  for (std::size_t i = 0; i < count; ++i) {
    acc += static_cast<u128>(y[i]) * c[i * stride];
    if ((i & 7) == 7) acc = p.reduce(acc);
  }
  return p.reduce(acc);
}

}  // namespace

RnsTool::RnsTool(polyring::RingParamsPtr q_ring, const PlainModulus& t)
    : q_ring_(std::move(q_ring)),
      k_(q_ring_->size()),
      n_(q_ring_->n()) {
  const mpz_class& q = q_ring_->q();
  const mpz_class t_mpz = t.as_mpz();
  // P must exceed n * Q (tensor range) and 2 * t * n * Q (rounded range).
  const int need_bits = bit_length(q) + bit_length(t_mpz) +
                        static_cast<int>(std::log2(static_cast<double>(n_))) + 4;
  std::vector<std::uint64_t> exclude(q_ring_->base().moduli().size());
  for (std::size_t i = 0; i < k_; ++i) exclude[i] = q_ring_->modulus(i).value();
  std::vector<std::uint64_t> p_primes;
  mpz_class p_prod = 1;
  while (bit_length(p_prod) <= need_bits) {
    auto next = polyring::find_primes_congruent_one(62, 2 * n_, 1, exclude);
    exclude.push_back(next[0]);
    p_primes.push_back(next[0]);
    p_prod *= to_mpz(next[0]);
  }
  m_ = p_primes.size();
  p_ring_ = polyring::RingParams::create(n_, p_primes);
  const mpz_class& p = p_ring_->q();

  const auto& qb = q_ring_->base();
  const auto& pb = p_ring_->base();

  qhat_inv_.resize(k_);
  qhat_mod_p_.resize(k_ * m_);
  q_mod_p_.resize(m_);
  inv_q_.resize(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    const std::uint64_t qi = qb[i].value();
    const mpz_class qhat = q / to_mpz(qi);
    qhat_inv_[i] = qb[i].inv(mod_u64(qhat, qi));
    for (std::size_t j = 0; j < m_; ++j) {
      qhat_mod_p_[i * m_ + j] = mod_u64(qhat, pb[j].value());
    }
    inv_q_[i] = 1.0L / static_cast<long double>(qi);
  }
  for (std::size_t j = 0; j < m_; ++j) q_mod_p_[j] = mod_u64(q, pb[j].value());

  const mpz_class qp = q * p;
  const mpz_class tp = t_mpz * p;
  qphat_inv_q_.resize(k_);
  int_part_.resize(k_ * m_);
  frac_.resize(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    const std::uint64_t qi = qb[i].value();
    qphat_inv_q_[i] = qb[i].inv(mod_u64(qp / to_mpz(qi), qi));
    mpz_class ip, rem;
    mpz_fdiv_qr(ip.get_mpz_t(), rem.get_mpz_t(), tp.get_mpz_t(),
                to_mpz(qi).get_mpz_t());
    for (std::size_t j = 0; j < m_; ++j) {
      int_part_[i * m_ + j] = mod_u64(ip, pb[j].value());
    }
    frac_[i] = to_u128((rem << 128) / to_mpz(qi));
  }
  qphat_inv_p_.resize(m_);
  tphat_mod_p_.resize(m_);
  phat_inv_.resize(m_);
  phat_mod_q_.resize(m_ * k_);
  p_mod_q_.resize(k_);
  inv_p_.resize(m_);
  for (std::size_t j = 0; j < m_; ++j) {
    const std::uint64_t pj = pb[j].value();
    const mpz_class phat = p / to_mpz(pj);
    qphat_inv_p_[j] = pb[j].inv(mod_u64(qp / to_mpz(pj), pj));
    tphat_mod_p_[j] = mod_u64(t_mpz * phat, pj);
    phat_inv_[j] = pb[j].inv(mod_u64(phat, pj));
    for (std::size_t i = 0; i < k_; ++i) {
      phat_mod_q_[j * k_ + i] = mod_u64(phat, qb[i].value());
    }
    inv_p_[j] = 1.0L / static_cast<long double>(pj);
  }
  for (std::size_t i = 0; i < k_; ++i) p_mod_q_[i] = mod_u64(p, qb[i].value());
}

void RnsTool::lift_to_p(const RingElement& x, std::uint64_t* out) const {
  const auto& qb = q_ring_->base();
  const auto& pb = p_ring_->base();
  std::vector<std::uint64_t> y(k_);
  for (std::size_t c = 0; c < n_; ++c) {
    long double frac = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      y[i] = qb[i].mul(x.residue(i)[c], qhat_inv_[i]);
      frac += static_cast<long double>(y[i]) * inv_q_[i];
    }
    const auto v = static_cast<std::uint64_t>(std::llround(frac));
    for (std::size_t j = 0; j < m_; ++j) {
      const Modulus& pj = pb[j];
      const std::uint64_t s = dot_mod(y.data(), qhat_mod_p_.data() + j, k_, m_, pj);
      out[j * n_ + c] = pj.sub(s, pj.mul(v % pj.value(), q_mod_p_[j]));
    }
  }
}

void RnsTool::scale_and_round(const std::uint64_t* e_q, const std::uint64_t* e_p,
                              RingElement& out) const {
  const auto& qb = q_ring_->base();
  const auto& pb = p_ring_->base();
  std::vector<std::uint64_t> y(k_), r(m_), z(m_);
  for (std::size_t c = 0; c < n_; ++c) {
    // Fractional contribution sum_i y_i * frac_i in 2^-128 units.
    std::uint64_t acc0 = 0, acc1 = 0;
    u128 acc_hi = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      y[i] = qb[i].mul(e_q[i * n_ + c], qphat_inv_q_[i]);
      const u128 a = static_cast<u128>(y[i]) * static_cast<std::uint64_t>(frac_[i]);
      const u128 b = static_cast<u128>(y[i]) * static_cast<std::uint64_t>(frac_[i] >> 64);
      const std::uint64_t l0 = static_cast<std::uint64_t>(a);
      const u128 l1 = (a >> 64) + static_cast<std::uint64_t>(b);
      const u128 l2 = (b >> 64) + (l1 >> 64);
      acc0 += l0;
      const u128 s1 = static_cast<u128>(acc1) + static_cast<std::uint64_t>(l1) +
                      (acc0 < l0 ? 1 : 0);
      acc1 = static_cast<std::uint64_t>(s1);
      acc_hi += l2 + (s1 >> 64);
    }
    const u128 rounded = acc_hi + (acc1 >> 63);
    for (std::size_t j = 0; j < m_; ++j) {
      const Modulus& pj = pb[j];
      const std::uint64_t zj = pj.mul(e_p[j * n_ + c], qphat_inv_p_[j]);
      std::uint64_t s = dot_mod(y.data(), int_part_.data() + j, k_, m_, pj);
      s = pj.add(s, pj.reduce(rounded));
      s = pj.add(s, pj.mul(zj, tphat_mod_p_[j]));
      r[j] = s;
    }
    // Centered conversion of r from P to Q.
    long double frac = 0;
    for (std::size_t j = 0; j < m_; ++j) {
      z[j] = pb[j].mul(r[j], phat_inv_[j]);
      frac += static_cast<long double>(z[j]) * inv_p_[j];
    }
    const auto v = static_cast<std::uint64_t>(std::llround(frac));
    for (std::size_t i = 0; i < k_; ++i) {
      const Modulus& qi = qb[i];
      const std::uint64_t s = dot_mod(z.data(), phat_mod_q_.data() + i, m_, k_, qi);
      out.residue(i)[c] = qi.sub(s, qi.mul(v % qi.value(), p_mod_q_[i]));
    }
  }
}

}  // namespace hecnn::she
