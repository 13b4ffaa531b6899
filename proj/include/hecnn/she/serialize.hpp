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

#include <iosfwd>
#include <string>

#include "hecnn/she/ciphertext.hpp"
#include "hecnn/she/keys.hpp"

namespace hecnn::she {

// Ciphertext stream: "BFC1", params hash (u64), part count (u16), scale
// numerator and denominator as length-prefixed little-endian magnitudes,
// then each part's residues as little-endian u64 arrays.
void write_ciphertext(std::ostream& os, const Ciphertext& ct);
Ciphertext read_ciphertext(std::istream& is, const SheContextPtr& ctx);

// Key stream: "BFK1", params hash, key kind (u8), element count (u32),
// then per element a form byte and its residues.
void write_public_key(std::ostream& os, const PublicKey& pk);
void write_secret_key(std::ostream& os, const SecretKey& sk);
void write_relin_keys(std::ostream& os, const RelinKeys& rlk);
PublicKey read_public_key(std::istream& is, const SheContextPtr& ctx);
SecretKey read_secret_key(std::istream& is, const SheContextPtr& ctx);
RelinKeys read_relin_keys(std::istream& is, const SheContextPtr& ctx);

// Parameters as key=value text, so a context can be rebuilt from files.
void write_params(std::ostream& os, const HEParams& params);
HEParams read_params(std::istream& is);

}  // namespace hecnn::she
