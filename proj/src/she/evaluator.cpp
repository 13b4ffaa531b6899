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

#include "hecnn/she/evaluator.hpp"

#include <algorithm>

#include "hecnn/common/errors.hpp"
#include "hecnn/she/rns_tool.hpp"

namespace hecnn::she {

using polyring::Form;
using polyring::RingElement;

namespace {

void require_context(const Ciphertext& a) {
  if (!a.context() || a.size() < 2) throw crypto_error("invalid ciphertext");
}

void require_compatible(const Ciphertext& a, const Ciphertext& b) {
  require_context(a);
  require_context(b);
  if (a.params_id() != b.params_id()) {
    throw crypto_error("ciphertexts were produced under different parameters");
  }
}

void require_same_scale(const mpq_class& a, const mpq_class& b) {
  if (a != b) {
    throw crypto_error("scale mismatch in addition: " + a.get_str() + " vs " +
                       b.get_str());
  }
}

// Centered lift of x in [0, t) into residues modulo q_i.
std::uint64_t lift_plain(u128 x, const PlainModulus& t, const polyring::Modulus& qi) {
  if (x > t.value() / 2) {
    const auto r = static_cast<std::uint64_t>((t.value() - x) % qi.value());
    return qi.neg(r);
  }
  return static_cast<std::uint64_t>(x % qi.value());
}

}  // namespace

void eval_add_inplace(Ciphertext& a, const Ciphertext& b) {
  require_compatible(a, b);
  require_same_scale(a.scale(), b.scale());
  while (a.size() < b.size()) a.parts().emplace_back(a.context()->ring());
  for (std::size_t i = 0; i < b.size(); ++i) polyring::add_inplace(a[i], b[i]);
}

Ciphertext eval_add(const Ciphertext& a, const Ciphertext& b) {
  Ciphertext out = a;
  eval_add_inplace(out, b);
  return out;
}

Ciphertext eval_negate(const Ciphertext& a) {
  require_context(a);
  Ciphertext out = a;
  for (auto& part : out.parts()) part = polyring::ring_neg(part);
  return out;
}

Ciphertext eval_sub(const Ciphertext& a, const Ciphertext& b) {
  return eval_add(a, eval_negate(b));
}

void eval_add_plain_inplace(Ciphertext& a, const Plaintext& p) {
  require_context(a);
  require_same_scale(a.scale(), p.scale);
  const auto& ctx = *a.context();
  if (p.coeffs.size() != ctx.n()) throw crypto_error("plaintext length mismatch");
  const auto& ring = *ctx.ring();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& qi = ring.modulus(i);
    const std::uint64_t d = ctx.delta()[i];
    auto r = a[0].residue(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (p.coeffs[j] == 0) continue;
      const auto m = static_cast<std::uint64_t>(p.coeffs[j] % qi.value());
      r[j] = qi.add(r[j], qi.mul(m, d));
    }
  }
}

Ciphertext eval_add_plain(const Ciphertext& a, const Plaintext& p) {
  Ciphertext out = a;
  eval_add_plain_inplace(out, p);
  return out;
}

Ciphertext eval_mul_scalar(const Ciphertext& a, const mpz_class& value,
                           const mpq_class& scale) {
  require_context(a);
  const auto& ctx = *a.context();
  const mpz_class centered = ctx.t().centered(ctx.t().reduce(value));
  std::vector<std::uint64_t> res(ctx.ring()->size());
  ctx.ring()->base().decompose(centered, res.data(), 1);
  Ciphertext out = a;
  for (auto& part : out.parts()) polyring::mul_scalar_inplace(part, res);
  out.set_scale(a.scale() * scale);
  return out;
}

Ciphertext eval_dot_scalar(std::span<const Ciphertext* const> inputs,
                           std::span<const mpz_class> weights, const mpq_class& weight_scale) {
  if (inputs.empty() || inputs.size() != weights.size()) {
    throw crypto_error("dot product needs one weight per ciphertext");
  }
  const Ciphertext& first = *inputs[0];
  require_context(first);
  const auto& ctx = *first.context();
  std::size_t parts = 0;
  for (const Ciphertext* c : inputs) {
    require_compatible(first, *c);
    require_same_scale(first.scale(), c->scale());
    parts = std::max(parts, c->size());
  }
  Ciphertext out(first.context(), parts);
  std::vector<std::uint64_t> res(ctx.ring()->size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const mpz_class centered = ctx.t().centered(ctx.t().reduce(weights[k]));
    if (centered == 0) continue;
    ctx.ring()->base().decompose(centered, res.data(), 1);
    for (std::size_t j = 0; j < inputs[k]->size(); ++j) {
      polyring::mul_scalar_accumulate(out[j], (*inputs[k])[j], res);
    }
  }
  out.set_scale(first.scale() * weight_scale);
  return out;
}

Ciphertext eval_mul_plain(const Ciphertext& a, const Plaintext& p) {
  require_context(a);
  const auto& ctx = *a.context();
  if (p.coeffs.size() != ctx.n()) throw crypto_error("plaintext length mismatch");
  if (p.is_constant()) return eval_mul_scalar(a, to_mpz(p.coeffs[0]), p.scale);
  const auto& ring = ctx.ring();
  RingElement m(ring);
  for (std::size_t i = 0; i < ring->size(); ++i) {
    auto r = m.residue(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      r[j] = lift_plain(p.coeffs[j], ctx.t(), ring->modulus(i));
    }
  }
  m.to_evaluation();
  Ciphertext out = a;
  for (auto& part : out.parts()) {
    part.to_evaluation();
    part = polyring::ring_mul(part, m);
    part.to_coefficient();
  }
  out.set_scale(a.scale() * p.scale);
  return out;
}

Ciphertext eval_mul_no_relin(const Ciphertext& a, const Ciphertext& b) {
  require_compatible(a, b);
  const auto& ctx = *a.context();
  const RnsTool& tool = ctx.rns_tool();
  const auto& q_ring = tool.q_ring();
  const auto& p_ring = tool.p_ring();
  auto extend = [&](const Ciphertext& c, std::vector<RingElement>& in_q,
                    std::vector<RingElement>& in_p) {
    for (const auto& part : c.parts()) {
      RingElement xq = part;
      RingElement xp(p_ring);
      tool.lift_to_p(part, xp.data().data());
      xq.to_evaluation();
      xp.to_evaluation();
      in_q.push_back(std::move(xq));
      in_p.push_back(std::move(xp));
    }
  };
  std::vector<RingElement> aq, ap, bq, bp;
  extend(a, aq, ap);
  const bool square = &a == &b;
  if (!square) extend(b, bq, bp);
  const auto& rbq = square ? aq : bq;
  const auto& rbp = square ? ap : bp;

  const std::size_t out_size = a.size() + b.size() - 1;
  Ciphertext out(a.context(), out_size);
  for (std::size_t k = 0; k < out_size; ++k) {
    RingElement eq(q_ring, Form::kEvaluation), ep(p_ring, Form::kEvaluation);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (k < i || k - i >= b.size()) continue;
      polyring::multiply_accumulate(eq, aq[i], rbq[k - i]);
      polyring::multiply_accumulate(ep, ap[i], rbp[k - i]);
    }
    eq.to_coefficient();
    ep.to_coefficient();
    tool.scale_and_round(eq.data().data(), ep.data().data(), out[k]);
  }
  out.set_scale(a.scale() * b.scale());
  return out;
}

Ciphertext relinearize(const Ciphertext& a, const RelinKeys& rlk) {
  require_context(a);
  if (a.size() == 2) return a;
  if (a.size() != 3) throw crypto_error("relinearization expects a 3-part ciphertext");
  const auto& ctx = *a.context();
  if (!rlk.ctx || rlk.ctx->params_id() != ctx.params_id() ||
      rlk.keys.size() != ctx.relin_key_count()) {
    throw crypto_error("relinearization keys do not match ciphertext parameters");
  }
  const auto& ring = ctx.ring();
  const std::size_t n = ctx.n();
  const int w = ctx.params().relin_decomp_bits;
  const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
  RingElement acc0(ring, Form::kEvaluation), acc1(ring, Form::kEvaluation);
  RingElement digit(ring);
  std::vector<std::uint64_t> y(n);
  std::size_t key = 0;
  for (std::size_t i = 0; i < ring->size(); ++i) {
    const auto& qi = ring->modulus(i);
    const std::uint64_t inv = ring->base().punctured_inv(i);
    auto c2 = a[2].residue(i);
    for (std::size_t j = 0; j < n; ++j) y[j] = qi.mul(c2[j], inv);
    for (int l = 0; l < ctx.digits_per_modulus(); ++l, ++key) {
      digit = RingElement(ring);
      for (std::size_t r = 0; r < ring->size(); ++r) {
        const std::uint64_t qr = ring->modulus(r).value();
        auto d = digit.residue(r);
        for (std::size_t j = 0; j < n; ++j) {
          const std::uint64_t v = (y[j] >> (w * l)) & mask;
          d[j] = v < qr ? v : v % qr;
        }
      }
      digit.to_evaluation();
      polyring::multiply_accumulate(acc0, digit, rlk.keys[key].first);
      polyring::multiply_accumulate(acc1, digit, rlk.keys[key].second);
    }
  }
  acc0.to_coefficient();
  acc1.to_coefficient();
  Ciphertext out(a.context(), 2);
  out[0] = polyring::ring_add(a[0], acc0);
  out[1] = polyring::ring_add(a[1], acc1);
  out.set_scale(a.scale());
  return out;
}

Ciphertext eval_mul(const Ciphertext& a, const Ciphertext& b, const RelinKeys& rlk) {
  if (a.size() != 2 || b.size() != 2) {
    throw crypto_error("eval_mul expects two-part ciphertexts");
  }
  return relinearize(eval_mul_no_relin(a, b), rlk);
}

Ciphertext eval_square(const Ciphertext& a, const RelinKeys& rlk) {
  return relinearize(eval_mul_no_relin(a, a), rlk);
}

}  // namespace hecnn::she
