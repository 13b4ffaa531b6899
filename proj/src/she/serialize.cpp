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

#include "hecnn/she/serialize.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hecnn/common/errors.hpp"

namespace hecnn::she {

using polyring::Form;
using polyring::RingElement;

namespace {

constexpr char kCtMagic[4] = {'B', 'F', 'C', '1'};
constexpr char kKeyMagic[4] = {'B', 'F', 'K', '1'};
enum class KeyKind : std::uint8_t { kPublic = 1, kSecret = 2, kRelin = 3 };

template <typename T>
void put(std::ostream& os, T v) {
  std::array<char, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  }
  os.write(buf.data(), buf.size());
}

template <typename T>
T get(std::istream& is) {
  std::array<unsigned char, sizeof(T)> buf;
  if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw data_error("truncated ciphertext or key stream");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

void put_mpz(std::ostream& os, const mpz_class& v) {
  std::size_t count = 0;
  std::vector<unsigned char> bytes((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(bytes.data(), &count, -1, 1, -1, 0, v.get_mpz_t());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(count));
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(count));
}

mpz_class get_mpz(std::istream& is) {
  const auto count = get<std::uint32_t>(is);
  if (count > (1u << 20)) throw data_error("implausible integer length in stream");
  std::vector<unsigned char> bytes(count);
  if (count && !is.read(reinterpret_cast<char*>(bytes.data()), count)) {
    throw data_error("truncated ciphertext or key stream");
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), count, -1, 1, -1, 0, bytes.data());
  return v;
}

void put_element(std::ostream& os, const RingElement& e) {
  put<std::uint8_t>(os, e.form() == Form::kEvaluation ? 1 : 0);
  for (auto v : e.data()) put<std::uint64_t>(os, v);
}

RingElement get_element(std::istream& is, const SheContext& ctx) {
  const auto form = get<std::uint8_t>(is);
  if (form > 1) throw data_error("invalid ring element form tag");
  RingElement e(ctx.ring(), form == 1 ? Form::kEvaluation : Form::kCoefficient);
  const std::size_t n = ctx.n();
  for (std::size_t i = 0; i < ctx.ring()->size(); ++i) {
    const std::uint64_t q = ctx.ring()->modulus(i).value();
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = get<std::uint64_t>(is);
      if (v >= q) throw data_error("residue out of range in stream");
      e.residue(i)[j] = v;
    }
  }
  return e;
}

void check_magic(std::istream& is, const char (&magic)[4], const char* what) {
  char buf[4];
  if (!is.read(buf, 4)) throw data_error(std::string("truncated ") + what);
  if (std::memcmp(buf, magic, 4) != 0) throw data_error(std::string("bad magic for ") + what);
}

void check_hash(std::istream& is, const SheContext& ctx) {
  if (get<std::uint64_t>(is) != ctx.params_id()) {
    throw crypto_error("stream was produced under different parameters");
  }
}

void write_key(std::ostream& os, const SheContext& ctx, KeyKind kind,
               const std::vector<const RingElement*>& elems) {
  os.write(kKeyMagic, 4);
  put<std::uint64_t>(os, ctx.params_id());
  put<std::uint8_t>(os, static_cast<std::uint8_t>(kind));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(elems.size()));
  for (const auto* e : elems) put_element(os, *e);
}

std::vector<RingElement> read_key(std::istream& is, const SheContext& ctx,
                                  KeyKind kind) {
  check_magic(is, kKeyMagic, "key");
  check_hash(is, ctx);
  if (get<std::uint8_t>(is) != static_cast<std::uint8_t>(kind)) {
    throw data_error("key file holds a different key kind");
  }
  const auto count = get<std::uint32_t>(is);
  if (count > 4096) throw data_error("implausible key element count");
  std::vector<RingElement> out;
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(get_element(is, ctx));
  return out;
}

}  // namespace

void write_ciphertext(std::ostream& os, const Ciphertext& ct) {
  os.write(kCtMagic, 4);
  put<std::uint64_t>(os, ct.params_id());
  put<std::uint16_t>(os, static_cast<std::uint16_t>(ct.size()));
  put_mpz(os, ct.scale().get_num());
  put_mpz(os, ct.scale().get_den());
  for (const auto& part : ct.parts()) {
    for (auto v : part.data()) put<std::uint64_t>(os, v);
  }
}

Ciphertext read_ciphertext(std::istream& is, const SheContextPtr& ctx) {
  check_magic(is, kCtMagic, "ciphertext");
  check_hash(is, *ctx);
  const auto parts = get<std::uint16_t>(is);
  if (parts < 2) throw data_error("ciphertext with fewer than two parts");
  mpz_class num = get_mpz(is);
  mpz_class den = get_mpz(is);
  if (den == 0) throw data_error("invalid ciphertext scale");
  mpq_class scale(num, den);
  if (scale <= 0) throw data_error("invalid ciphertext scale");
  Ciphertext ct(ctx, parts);
  for (std::size_t k = 0; k < parts; ++k) {
    for (std::size_t i = 0; i < ctx->ring()->size(); ++i) {
      const std::uint64_t q = ctx->ring()->modulus(i).value();
      for (auto& v : ct[k].residue(i)) {
        v = get<std::uint64_t>(is);
        if (v >= q) throw data_error("residue out of range in ciphertext");
      }
    }
  }
  ct.set_scale(scale);
  return ct;
}

void write_public_key(std::ostream& os, const PublicKey& pk) {
  write_key(os, *pk.ctx, KeyKind::kPublic, {&pk.p0, &pk.p1});
}

void write_secret_key(std::ostream& os, const SecretKey& sk) {
  write_key(os, *sk.ctx, KeyKind::kSecret, {&sk.s});
}

void write_relin_keys(std::ostream& os, const RelinKeys& rlk) {
  std::vector<const RingElement*> elems;
  for (const auto& [a, b] : rlk.keys) {
    elems.push_back(&a);
    elems.push_back(&b);
  }
  write_key(os, *rlk.ctx, KeyKind::kRelin, elems);
}

PublicKey read_public_key(std::istream& is, const SheContextPtr& ctx) {
  auto e = read_key(is, *ctx, KeyKind::kPublic);
  if (e.size() != 2) throw data_error("public key must have two elements");
  return PublicKey{ctx, std::move(e[0]), std::move(e[1])};
}

SecretKey read_secret_key(std::istream& is, const SheContextPtr& ctx) {
  auto e = read_key(is, *ctx, KeyKind::kSecret);
  if (e.size() != 1) throw data_error("secret key must have one element");
  return SecretKey{ctx, std::move(e[0])};
}

RelinKeys read_relin_keys(std::istream& is, const SheContextPtr& ctx) {
  auto e = read_key(is, *ctx, KeyKind::kRelin);
  if (e.size() != 2 * ctx->relin_key_count()) {
    throw data_error("relinearization key has the wrong number of elements");
  }
  RelinKeys rlk{ctx, {}};
  for (std::size_t i = 0; i < e.size(); i += 2) {
    rlk.keys.emplace_back(std::move(e[i]), std::move(e[i + 1]));
  }
  return rlk;
}

void write_params(std::ostream& os, const HEParams& p) {
  os << "name=" << p.name << "\n";
  os << "n=" << p.n << "\n";
  os << "moduli=";
  for (std::size_t i = 0; i < p.moduli.size(); ++i) os << (i ? "," : "") << p.moduli[i];
  os << "\n";
  os << "t=" << to_string(p.t) << "\n";
  std::ostringstream sigma;
  sigma.precision(17);
  sigma << p.sigma;
  os << "sigma=" << sigma.str() << "\n";
  os << "security_level=" << p.security_level << "\n";
  os << "relin_decomp_bits=" << p.relin_decomp_bits << "\n";
}

HEParams read_params(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw data_error("malformed parameter line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw data_error("parameter file is missing '" + key + "'");
    return it->second;
  };
  HEParams p;
  try {
    p.name = kv.count("name") ? kv["name"] : "custom";
    p.n = std::stoull(need("n"));
    std::stringstream ms(need("moduli"));
    std::string tok;
    while (std::getline(ms, tok, ',')) p.moduli.push_back(std::stoull(tok));
    p.t = to_u128(mpz_class(need("t")));
    p.sigma = std::stod(need("sigma"));
    p.security_level = std::stoi(need("security_level"));
    p.relin_decomp_bits = std::stoi(need("relin_decomp_bits"));
  } catch (const std::invalid_argument&) {
    throw data_error("malformed numeric value in parameter file");
  }
  p.validate();
  return p;
}

}  // namespace hecnn::she
