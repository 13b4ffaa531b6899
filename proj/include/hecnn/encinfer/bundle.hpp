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

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>

#include "hecnn/encinfer/encinfer.hpp"

namespace hecnn::encinfer {

// A list of ciphertexts that share one slot batch, as exchanged between the
// client and server steps. Stream: "BFB1", batch size (u32), count (u32),
// then each ciphertext in its own serialized form.
struct CtBundle {
  CtVec cts;
  std::size_t batch_size = 0;
};

void write_bundle(std::ostream& os, const CtBundle& bundle);
CtBundle read_bundle(std::istream& is, const she::SheContextPtr& ctx);

void save_bundle(const std::string& path, const CtBundle& bundle);
CtBundle load_bundle(const std::string& path, const she::SheContextPtr& ctx);

}  // namespace hecnn::encinfer
