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

#include "hecnn/encinfer/bundle.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "hecnn/common/errors.hpp"
#include "hecnn/she/serialize.hpp"

namespace hecnn::encinfer {
namespace {

constexpr char kMagic[4] = {'B', 'F', 'B', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw data_error("truncated ciphertext bundle");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

void write_bundle(std::ostream& os, const CtBundle& bundle) {
  os.write(kMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(bundle.batch_size));
  put_u32(os, static_cast<std::uint32_t>(bundle.cts.size()));
  for (const auto& ct : bundle.cts) she::write_ciphertext(os, ct);
}

CtBundle read_bundle(std::istream& is, const she::SheContextPtr& ctx) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw data_error("not a ciphertext bundle (bad magic)");
  }
  CtBundle b;
  b.batch_size = get_u32(is);
  const auto count = get_u32(is);
  if (b.batch_size == 0 || b.batch_size > ctx->n()) throw data_error("bundle batch size out of range");
  b.cts.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) b.cts.push_back(she::read_ciphertext(is, ctx));
  return b;
}

void save_bundle(const std::string& path, const CtBundle& bundle) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw data_error("cannot write " + path);
  write_bundle(os, bundle);
  if (!os) throw data_error("write failed for " + path);
}

CtBundle load_bundle(const std::string& path, const she::SheContextPtr& ctx) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw data_error("cannot read " + path);
  return read_bundle(is, ctx);
}

}  // namespace hecnn::encinfer
