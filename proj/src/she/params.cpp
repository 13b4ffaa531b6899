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

#include "hecnn/she/params.hpp"

#include <cstring>
#include <sstream>

#include "hecnn/common/errors.hpp"
#include "hecnn/she/rns_tool.hpp"

namespace hecnn::she {

namespace {

struct SecurityRow {
  std::size_t n;
  int bits128;
  int bits192;
};

// Homomorphic encryption standard, ternary secret, classical security.
constexpr SecurityRow kSecurityTable[] = {
    {1024, 27, 19},  {2048, 54, 37},   {4096, 109, 75},
    {8192, 218, 152}, {16384, 438, 305},
};

struct PresetSpec {
  const char* name;
  std::size_t n;
  int t_bits;
};

constexpr PresetSpec kPresets[] = {
    {"small", 2048, 14},
    {"medium", 8192, 33},
    {"large", 16384, 40},
};

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

template <typename T>
void fnv(std::uint64_t& h, const T& v) {
  fnv_bytes(h, &v, sizeof(T));
}

}  // namespace

int max_coeff_modulus_bits(std::size_t n, int security_level) {
  for (const auto& row : kSecurityTable) {
    if (row.n != n) continue;
    if (security_level == 128) return row.bits128;
    if (security_level == 192) return row.bits192;
    throw crypto_error("unsupported security level " +
                       std::to_string(security_level) + " (expected 128 or 192)");
  }
  throw crypto_error("unsupported ring degree n=" + std::to_string(n) +
                     " (expected 1024, 2048, 4096, 8192 or 16384)");
}

std::vector<int> split_modulus_bits(int total_bits) {
  const int count = (total_bits + 61) / 62;
  std::vector<int> bits(static_cast<std::size_t>(count), total_bits / count);
  for (int i = 0; i < total_bits % count; ++i) ++bits[static_cast<std::size_t>(i)];
  return bits;
}

std::vector<std::uint64_t> choose_coeff_moduli(std::size_t n, int total_bits) {
  std::vector<std::uint64_t> moduli;
  for (int b : split_modulus_bits(total_bits)) {
    moduli.push_back(polyring::find_primes_congruent_one(b, 2 * n, 1, moduli)[0]);
  }
  return moduli;
}

HEParams HEParams::create(std::size_t n, u128 t, int security_level,
                          int relin_decomp_bits) {
  HEParams p;
  p.n = n;
  p.t = t;
  p.security_level = security_level;
  p.relin_decomp_bits = relin_decomp_bits;
  p.moduli = choose_coeff_moduli(n, max_coeff_modulus_bits(n, security_level));
  p.validate();
  return p;
}

HEParams HEParams::preset(const std::string& name, int t_bits) {
  for (const auto& spec : kPresets) {
    if (name != spec.name) continue;
    const int bits = t_bits > 0 ? t_bits : spec.t_bits;
    HEParams p = create(spec.n, find_plain_prime(bits, 2 * spec.n));
    p.name = name;
    return p;
  }
  throw usage_error("unknown preset '" + name + "' (expected small, medium or large)");
}

std::vector<std::string> HEParams::preset_names() {
  std::vector<std::string> out;
  for (const auto& spec : kPresets) out.emplace_back(spec.name);
  return out;
}

int HEParams::coeff_modulus_bits() const {
  mpz_class q = 1;
  for (auto m : moduli) q *= to_mpz(m);
  return bit_length(q);
}

void HEParams::validate() const {
  const int max_bits = max_coeff_modulus_bits(n, security_level);
  if (moduli.empty()) throw crypto_error("coefficient modulus is empty");
  const int bits = coeff_modulus_bits();
  if (bits > max_bits) {
    std::ostringstream os;
    os << "log2(q)=" << bits << " exceeds the maximum " << max_bits << " for n=" << n
       << " at " << security_level << "-bit security";
    throw crypto_error(os.str());
  }
  for (auto m : moduli) {
    if (!polyring::is_prime(m) || (m - 1) % (2 * n) != 0) {
      throw crypto_error("coefficient modulus prime " + std::to_string(m) +
                         " is not prime or not 1 mod 2n");
    }
  }
  if (t < 2 || !is_prime_u128(t) || (t - 1) % (2 * n) != 0) {
    throw crypto_error("plaintext modulus t=" + to_string(t) +
                       " must be a prime congruent to 1 mod 2n=" +
                       std::to_string(2 * n));
  }
  mpz_class q = 1;
  for (auto m : moduli) q *= to_mpz(m);
  if (to_mpz(t) >= q) throw crypto_error("plaintext modulus must be below q");
  if (!(sigma > 0)) throw crypto_error("sigma must be positive");
  if (relin_decomp_bits < 1 || relin_decomp_bits > 60) {
    throw crypto_error("relinearization digit width must be in [1, 60]");
  }
}

std::uint64_t HEParams::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv(h, static_cast<std::uint64_t>(n));
  fnv(h, static_cast<std::uint64_t>(moduli.size()));
  for (auto m : moduli) fnv(h, m);
  fnv(h, static_cast<std::uint64_t>(t));
  fnv(h, static_cast<std::uint64_t>(t >> 64));
  std::uint64_t sigma_bits;
  std::memcpy(&sigma_bits, &sigma, sizeof sigma_bits);
  fnv(h, sigma_bits);
  fnv(h, static_cast<std::int64_t>(security_level));
  fnv(h, static_cast<std::int64_t>(relin_decomp_bits));
  return h;
}

bool HEParams::operator==(const HEParams& o) const {
  return n == o.n && moduli == o.moduli && t == o.t && sigma == o.sigma &&
         security_level == o.security_level &&
         relin_decomp_bits == o.relin_decomp_bits;
}

SheContext::SheContext(const HEParams& params)
    : params_(params), params_id_(params.hash()), t_(params.t) {
  params_.validate();
  ring_ = polyring::RingParams::create(params_.n, params_.moduli);
  plain_ntt_ = std::make_unique<PlainNtt>(params_.n, t_);
  rns_tool_ = std::make_unique<RnsTool>(ring_, t_);
  delta_mpz_ = ring_->q() / t_.as_mpz();
  delta_.resize(ring_->size());
  ring_->base().decompose(delta_mpz_, delta_.data(), 1);
  int max_prime_bits = 0;
  for (std::size_t i = 0; i < ring_->size(); ++i) {
    max_prime_bits = std::max(max_prime_bits, ring_->modulus(i).bit_count());
  }
  digits_per_modulus_ =
      (max_prime_bits + params_.relin_decomp_bits - 1) / params_.relin_decomp_bits;
}

SheContext::~SheContext() = default;

std::shared_ptr<const SheContext> SheContext::create(const HEParams& params) {
  return std::shared_ptr<const SheContext>(new SheContext(params));
}

}  // namespace hecnn::she
