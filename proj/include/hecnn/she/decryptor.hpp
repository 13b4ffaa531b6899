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

#include "hecnn/she/ciphertext.hpp"
#include "hecnn/she/keys.hpp"

namespace hecnn::she {

struct DecryptResult {
  Plaintext plain;
  int noise_budget = 0;
  // False when the budget is exhausted; the plaintext is then unreliable.
  bool ok = false;
};

// Decrypts a ciphertext of any part count >= 2 and measures its noise.
DecryptResult decrypt_checked(const SecretKey& sk, const Ciphertext& ct);
// Throws a crypto error when the budget is exhausted.
Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct);
// floor(log2(q / (2 * ||[t * c(s)]_q||))), clamped at zero.
int noise_budget(const SecretKey& sk, const Ciphertext& ct);

}  // namespace hecnn::she
