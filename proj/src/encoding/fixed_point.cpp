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

#include "hecnn/encoding/fixed_point.hpp"

#include <cmath>
#include <sstream>

#include "hecnn/common/errors.hpp"

namespace hecnn::encoding {

Scale FixedPointConfig::input_scale() const {
  return Scale(mpz_class(1) << input_scale_bits);
}

Scale FixedPointConfig::weight_scale() const {
  return Scale(mpz_class(1) << weight_scale_bits);
}

void FixedPointConfig::validate() const {
  if (input_scale_bits < 0 || weight_scale_bits < 0 || coeff_scale_bits < 0) {
    throw usage_error("fixed-point scale bits must be non-negative");
  }
  if (t < 2) throw usage_error("plaintext modulus must be at least 2");
}

mpz_class round_nearest(const mpq_class& v) {
  mpz_class twice_num = 2 * v.get_num() + (sgn(v) >= 0 ? v.get_den() : -v.get_den());
  mpz_class den2 = 2 * v.get_den();
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), twice_num.get_mpz_t(), den2.get_mpz_t());
  return q;
}

mpq_class exact(double v) {
  if (!std::isfinite(v)) throw data_error("cannot encode a non-finite value");
  mpq_class q(v);
  q.canonicalize();
  return q;
}

mpz_class center_mod(const mpz_class& v, const mpz_class& t) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), t.get_mpz_t());
  if (2 * r > t) r -= t;
  return r;
}

bool fits(const mpz_class& v, const mpz_class& t) {
  return 2 * v <= t && -2 * v < t;
}

ScaledInteger encode_real(double v, const Scale& scale, u128 t) {
  if (sgn(scale) <= 0) throw usage_error("scale must be positive");
  ScaledInteger si{round_nearest(exact(v) * scale), scale};
  const mpz_class tm = to_mpz(t);
  if (!fits(si.value, tm)) {
    std::ostringstream os;
    os << "value " << v << " at scale 2^" << log2_of(scale) << " encodes to magnitude 2^"
       << std::log2(std::abs(si.value.get_d())) << ", which does not fit the plaintext modulus 2^"
       << std::log2(tm.get_d()) << " (needs |v| * scale < t/2)";
    throw data_error(os.str());
  }
  return si;
}

double decode(const mpz_class& value, const Scale& scale) {
  return mpq_class(mpq_class(value) / scale).get_d();
}

double decode_real(const ScaledInteger& si) { return decode(si.value, si.scale); }

std::string scale_string(const Scale& s) {
  const mpz_class& num = s.get_num();
  const mpz_class& den = s.get_den();
  auto pow2 = [](const mpz_class& v) -> int {
    if (v <= 0) return -1;
    const auto bits = mpz_sizeinbase(v.get_mpz_t(), 2);
    return mpz_popcount(v.get_mpz_t()) == 1 ? static_cast<int>(bits - 1) : -1;
  };
  if (den == 1 && pow2(num) >= 0) return "2^" + std::to_string(pow2(num));
  std::ostringstream os;
  os << "2^" << log2_of(s);
  return os.str();
}

double log2_of(const mpq_class& v) {
  long e_num = 0, e_den = 0;
  const double m_num = mpz_get_d_2exp(&e_num, v.get_num().get_mpz_t());
  const double m_den = mpz_get_d_2exp(&e_den, v.get_den().get_mpz_t());
  return std::log2(std::abs(m_num / m_den)) + static_cast<double>(e_num - e_den);
}

}  // namespace hecnn::encoding
