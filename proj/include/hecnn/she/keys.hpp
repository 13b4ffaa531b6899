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

#include <utility>
#include <vector>

#include "hecnn/common/prng.hpp"
#include "hecnn/polyring/ring.hpp"
#include "hecnn/she/params.hpp"

namespace hecnn::she {

// Secret key s, stored in evaluation form.
struct SecretKey {
  SheContextPtr ctx;
  polyring::RingElement s;
};

// Encryption of zero (-(a*s + e), a), evaluation form.
struct PublicKey {
  SheContextPtr ctx;
  polyring::RingElement p0, p1;
};

// One key-switching pair per (RNS residue, base-2^w digit), evaluation form.
struct RelinKeys {
  SheContextPtr ctx;
  std::vector<std::pair<polyring::RingElement, polyring::RingElement>> keys;
};

struct KeySet {
  PublicKey pk;
  SecretKey sk;
  RelinKeys rlk;
};

KeySet keygen(const SheContextPtr& ctx, Prng& rng);
PublicKey make_public_key(const SecretKey& sk, Prng& rng);
RelinKeys make_relin_keys(const SecretKey& sk, Prng& rng);

}  // namespace hecnn::she
