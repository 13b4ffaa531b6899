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

#include "hecnn/common/prng.hpp"
#include "hecnn/she/ciphertext.hpp"
#include "hecnn/she/keys.hpp"

namespace hecnn::she {

// Public-key encryption; the ciphertext inherits the plaintext's scale.
Ciphertext encrypt(const PublicKey& pk, const Plaintext& pt, Prng& rng);

}  // namespace hecnn::she
