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

#include "hecnn/polyring/ring.hpp"

#include <stdexcept>
#include <string>

namespace hecnn::polyring {

namespace {

void require_same(const RingElement& a, const RingElement& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ring operation on an empty element");
  }
  if (!same_ring(a.params(), b.params())) {
    throw std::invalid_argument("ring parameter mismatch");
  }
  if (a.form() != b.form()) {
    throw std::invalid_argument("ring elements are in different forms");
  }
}

}  // namespace

RingParams::RingParams(std::size_t n, RnsBase base)
    : n_(n), log_n_(0), base_(std::move(base)) {
  while ((std::size_t{1} << log_n_) < n_) ++log_n_;
  bool ntt_ok = n_ >= 2;
  for (const auto& m : base_.moduli()) {
    if (!is_prime(m.value()) || (m.value() - 1) % (2 * n_) != 0) ntt_ok = false;
  }
  if (ntt_ok) {
    ntt_.reserve(base_.size());
    for (const auto& m : base_.moduli()) ntt_.emplace_back(n_, m);
  }
}

RingParamsPtr RingParams::create(std::size_t n,
                                 std::vector<std::uint64_t> moduli) {
  if (n == 0 || (n & (n - 1)) != 0 || n > 16384) {
    throw std::invalid_argument("ring degree must be a power of two <= 16384, got " +
                                std::to_string(n));
  }
  std::vector<Modulus> mods;
  mods.reserve(moduli.size());
  for (auto m : moduli) mods.emplace_back(m);
  return RingParamsPtr(new RingParams(n, RnsBase(std::move(mods))));
}

bool RingParams::operator==(const RingParams& o) const {
  if (n_ != o.n_ || base_.size() != o.base_.size()) return false;
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (!(base_[i] == o.base_[i])) return false;
  }
  return true;
}

bool same_ring(const RingParamsPtr& a, const RingParamsPtr& b) {
  return a == b || (a && b && *a == *b);
}

RingElement::RingElement(RingParamsPtr params, Form form)
    : params_(std::move(params)), form_(form) {
  data_.assign(params_->size() * params_->n(), 0);
}

RingElement RingElement::from_signed(RingParamsPtr params,
                                     std::span<const std::int64_t> coeffs) {
  if (coeffs.size() != params->n()) {
    throw std::invalid_argument("coefficient count does not match ring degree");
  }
  RingElement out(params);
  for (std::size_t i = 0; i < params->size(); ++i) {
    auto r = out.residue(i);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      r[j] = params->modulus(i).from_signed(coeffs[j]);
    }
  }
  return out;
}

RingElement RingElement::from_bigints(RingParamsPtr params,
                                      std::span<const mpz_class> coeffs) {
  if (coeffs.size() != params->n()) {
    throw std::invalid_argument("coefficient count does not match ring degree");
  }
  RingElement out(params);
  for (std::size_t j = 0; j < coeffs.size(); ++j) out.set_coeff(j, coeffs[j]);
  return out;
}

mpz_class RingElement::coeff(std::size_t j) const {
  if (form_ != Form::kCoefficient) {
    throw std::logic_error("coefficient access on evaluation-form element");
  }
  mpz_class out;
  params_->base().compose(data_.data() + j, params_->n(), out);
  return out;
}

mpz_class RingElement::coeff_centered(std::size_t j) const {
  if (form_ != Form::kCoefficient) {
    throw std::logic_error("coefficient access on evaluation-form element");
  }
  mpz_class out;
  params_->base().compose_centered(data_.data() + j, params_->n(), out);
  return out;
}

std::vector<mpz_class> RingElement::to_bigints() const {
  std::vector<mpz_class> out(n());
  for (std::size_t j = 0; j < n(); ++j) out[j] = coeff(j);
  return out;
}

void RingElement::set_coeff(std::size_t j, const mpz_class& value) {
  params_->base().decompose(value, data_.data() + j, params_->n());
}

void RingElement::to_evaluation() {
  if (form_ == Form::kEvaluation) return;
  if (!params_->ntt_enabled()) {
    throw std::logic_error("ring does not support NTT");
  }
  for (std::size_t i = 0; i < params_->size(); ++i) {
    params_->ntt(i).forward(residue(i).data());
  }
  form_ = Form::kEvaluation;
}

void RingElement::to_coefficient() {
  if (form_ == Form::kCoefficient) return;
  for (std::size_t i = 0; i < params_->size(); ++i) {
    params_->ntt(i).inverse(residue(i).data());
  }
  form_ = Form::kCoefficient;
}

bool RingElement::is_zero() const {
  for (auto v : data_) {
    if (v != 0) return false;
  }
  return true;
}

bool RingElement::operator==(const RingElement& o) const {
  return same_ring(params_, o.params_) && form_ == o.form_ && data_ == o.data_;
}

void add_inplace(RingElement& a, const RingElement& b) {
  require_same(a, b);
  const auto& p = *a.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Modulus& m = p.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = m.add(x[j], y[j]);
  }
}

void sub_inplace(RingElement& a, const RingElement& b) {
  require_same(a, b);
  const auto& p = *a.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Modulus& m = p.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = m.sub(x[j], y[j]);
  }
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
  RingElement out = a;
  add_inplace(out, b);
  return out;
}

RingElement ring_sub(const RingElement& a, const RingElement& b) {
  RingElement out = a;
  sub_inplace(out, b);
  return out;
}

RingElement ring_neg(const RingElement& a) {
  RingElement out = a;
  const auto& p = *a.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (auto& v : out.residue(i)) v = p.modulus(i).neg(v);
  }
  return out;
}

void multiply_accumulate(RingElement& a, const RingElement& b,
                         const RingElement& c) {
  require_same(b, c);
  require_same(a, b);
  if (b.form() != Form::kEvaluation) {
    throw std::logic_error("multiply_accumulate expects evaluation form");
  }
  const auto& p = *a.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Modulus& m = p.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    auto z = c.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = m.add(x[j], m.mul(y[j], z[j]));
    }
  }
}

RingElement ring_mul(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  const auto& p = *a.params();
  if (a.form() == Form::kEvaluation) {
    RingElement out(a.params(), Form::kEvaluation);
    multiply_accumulate(out, a, b);
    return out;
  }
  if (!p.ntt_enabled()) return ring_mul_schoolbook(a, b);
  RingElement x = a, y = b;
  x.to_evaluation();
  y.to_evaluation();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Modulus& m = p.modulus(i);
    auto xs = x.residue(i);
    auto ys = y.residue(i);
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = m.mul(xs[j], ys[j]);
  }
  x.to_coefficient();
  return x;
}

RingElement ring_mul_schoolbook(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  if (a.form() != Form::kCoefficient) {
    throw std::logic_error("schoolbook multiplication needs coefficient form");
  }
  const auto& p = *a.params();
  const std::size_t n = p.n();
  RingElement out(a.params());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Modulus& m = p.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    auto z = out.residue(i);
    for (std::size_t u = 0; u < n; ++u) {
      if (x[u] == 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        const std::uint64_t prod = m.mul(x[u], y[v]);
        const std::size_t k = u + v;
        if (k < n) {
          z[k] = m.add(z[k], prod);
        } else {
          z[k - n] = m.sub(z[k - n], prod);  // x^n = -1
        }
      }
    }
  }
  return out;
}

void mul_scalar_inplace(RingElement& a, std::span<const std::uint64_t> scalar) {
  const auto& p = *a.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Modulus& m = p.modulus(i);
    const std::uint64_t w = scalar[i];
    const std::uint64_t ws = shoup_precompute(w, m.value());
    for (auto& v : a.residue(i)) v = mul_shoup(v, w, ws, m.value());
  }
}

void mul_scalar_accumulate(RingElement& acc, const RingElement& a,
                           std::span<const std::uint64_t> scalar) {
  require_same(acc, a);
  const auto& p = *a.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::uint64_t q = p.modulus(i).value();
    const std::uint64_t w = scalar[i];
    if (w == 0) continue;
    const std::uint64_t ws = shoup_precompute(w, q);
    auto dst = acc.residue(i);
    const auto src = a.residue(i);
    for (std::size_t j = 0; j < dst.size(); ++j) {
      std::uint64_t v = dst[j] + mul_shoup(src[j], w, ws, q);
      dst[j] = v >= q ? v - q : v;
    }
  }
}

RingElement ring_mul_scalar(const RingElement& a, const mpz_class& scalar) {
  std::vector<std::uint64_t> res(a.params()->size());
  a.params()->base().decompose(scalar, res.data(), 1);
  RingElement out = a;
  mul_scalar_inplace(out, res);
  return out;
}

}  // namespace hecnn::polyring
