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
#include <memory>
#include <string>
#include <vector>

#include "hecnn/common/bigint.hpp"
#include "hecnn/polyring/ring.hpp"
#include "hecnn/she/plain_modulus.hpp"

namespace hecnn::she {

// Largest log2(q) allowed for ternary secrets at the given ring degree and
// security level, from the homomorphic encryption standard tables. Throws
// for unsupported combinations.
int max_coeff_modulus_bits(std::size_t n, int security_level);

struct HEParams {
  std::string name = "custom";
  std::size_t n = 0;
  std::vector<std::uint64_t> moduli;  // q = product of these primes
  u128 t = 0;
  double sigma = 3.2;
  int security_level = 128;
  int relin_decomp_bits = 16;

  // Picks q automatically from the security table.
  static HEParams create(std::size_t n, u128 t, int security_level = 128,
                         int relin_decomp_bits = 16);
  // "small", "medium" or "large"; t_bits > 0 overrides the preset's t.
  static HEParams preset(const std::string& name, int t_bits = 0);
  static std::vector<std::string> preset_names();

  // Throws hecnn::Error (crypto) naming the violated bound.
  void validate() const;
  int coeff_modulus_bits() const;
  std::uint64_t hash() const;

  bool operator==(const HEParams& o) const;
};

// Coefficient-modulus prime sizes that fill `total_bits` with near-equal
// primes of at most 62 bits.
std::vector<int> split_modulus_bits(int total_bits);
std::vector<std::uint64_t> choose_coeff_moduli(std::size_t n, int total_bits);

class RnsTool;

// Validated parameters plus every precomputation the scheme needs.
class SheContext {
 public:
  static std::shared_ptr<const SheContext> create(const HEParams& params);
  ~SheContext();

  const HEParams& params() const { return params_; }
  std::uint64_t params_id() const { return params_id_; }
  std::size_t n() const { return params_.n; }
  const polyring::RingParamsPtr& ring() const { return ring_; }
  const PlainModulus& t() const { return t_; }
  const PlainNtt& plain_ntt() const { return *plain_ntt_; }
  const RnsTool& rns_tool() const { return *rns_tool_; }

  // Delta = floor(q / t) mod q_i.
  const std::vector<std::uint64_t>& delta() const { return delta_; }
  const mpz_class& delta_mpz() const { return delta_mpz_; }
  // Number of base-2^w digits per RNS residue in relinearization.
  int digits_per_modulus() const { return digits_per_modulus_; }
  std::size_t relin_key_count() const {
    return static_cast<std::size_t>(digits_per_modulus_) * ring_->size();
  }

 private:
  explicit SheContext(const HEParams& params);

  HEParams params_;
  std::uint64_t params_id_;
  polyring::RingParamsPtr ring_;
  PlainModulus t_;
  std::unique_ptr<PlainNtt> plain_ntt_;
  std::unique_ptr<RnsTool> rns_tool_;
  std::vector<std::uint64_t> delta_;
  mpz_class delta_mpz_;
  int digits_per_modulus_;
};

using SheContextPtr = std::shared_ptr<const SheContext>;

}  // namespace hecnn::she
