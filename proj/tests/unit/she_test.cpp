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

#include <gtest/gtest.h>

#include <sstream>

#include "hecnn/common/errors.hpp"
#include "hecnn/common/prng.hpp"
#include "hecnn/she/batch_encoder.hpp"
#include "hecnn/she/decryptor.hpp"
#include "hecnn/she/encryptor.hpp"
#include "hecnn/she/evaluator.hpp"
#include "hecnn/she/keys.hpp"
#include "hecnn/she/params.hpp"
#include "hecnn/she/rns_tool.hpp"
#include "hecnn/she/serialize.hpp"

namespace hecnn::she {
namespace {

struct Fixture {
  SheContextPtr ctx;
  KeySet keys;
};

const Fixture& fixture(const std::string& name) {
  static std::map<std::string, Fixture> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    HEParams p = name == "tiny" ? HEParams::create(1024, 12289) : HEParams::preset(name);
    auto ctx = SheContext::create(p);
    Prng rng(std::hash<std::string>{}(name));
    it = cache.emplace(name, Fixture{ctx, keygen(ctx, rng)}).first;
  }
  return it->second;
}

Plaintext random_plain(const SheContext& ctx, Prng& rng) {
  Plaintext p(ctx.n());
  const u128 t = ctx.t().value();
  for (auto& c : p.coeffs) {
    c = ((static_cast<u128>(rng()) << 64) | rng()) % t;
  }
  return p;
}

std::vector<u128> random_slots(const SheContext& ctx, Prng& rng) {
  std::vector<u128> v(ctx.n());
  for (auto& c : v) c = ((static_cast<u128>(rng()) << 64) | rng()) % ctx.t().value();
  return v;
}

// Negacyclic product of plaintexts modulo t.
Plaintext plain_mul(const SheContext& ctx, const Plaintext& a, const Plaintext& b) {
  const std::size_t n = ctx.n();
  const mpz_class t = ctx.t().as_mpz();
  std::vector<mpz_class> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0) continue;
    const mpz_class ai = to_mpz(a.coeffs[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (b.coeffs[j] == 0) continue;
      const mpz_class prod = ai * to_mpz(b.coeffs[j]);
      if (i + j < n) acc[i + j] += prod; else acc[i + j - n] -= prod;
    }
  }
  Plaintext out(n);
  for (std::size_t i = 0; i < n; ++i) out.coeffs[i] = ctx.t().reduce(acc[i]);
  return out;
}

TEST(HEParams, SecurityTable) {
  EXPECT_EQ(max_coeff_modulus_bits(1024, 128), 27);
  EXPECT_EQ(max_coeff_modulus_bits(2048, 128), 54);
  EXPECT_EQ(max_coeff_modulus_bits(4096, 128), 109);
  EXPECT_EQ(max_coeff_modulus_bits(8192, 128), 218);
  EXPECT_EQ(max_coeff_modulus_bits(16384, 128), 438);
  EXPECT_EQ(max_coeff_modulus_bits(16384, 192), 305);
  EXPECT_THROW(max_coeff_modulus_bits(512, 128), Error);
  EXPECT_THROW(max_coeff_modulus_bits(2048, 256), Error);
}

TEST(HEParams, PresetsAreValid) {
  for (const auto& name : HEParams::preset_names()) {
    HEParams p = HEParams::preset(name);
    EXPECT_NO_THROW(p.validate());
    EXPECT_LE(p.coeff_modulus_bits(), max_coeff_modulus_bits(p.n, 128));
    EXPECT_EQ((p.t - 1) % (2 * p.n), 0u);
  }
  EXPECT_EQ(HEParams::preset("small").n, 2048u);
  EXPECT_EQ(HEParams::preset("medium").n, 8192u);
  EXPECT_EQ(HEParams::preset("large").n, 16384u);
  EXPECT_THROW(HEParams::preset("huge"), Error);
}

TEST(HEParams, ValidationNamesBound) {
  HEParams p = HEParams::preset("small");
  p.moduli.push_back(polyring::find_primes_congruent_one(30, 4096, 1, p.moduli)[0]);
  try {
    p.validate();
    FAIL() << "expected a security violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCrypto);
    EXPECT_NE(std::string(e.what()).find("exceeds the maximum 54"), std::string::npos);
  }
  HEParams bad_t = HEParams::preset("small");
  bad_t.t = 65539;  // prime, but not 1 mod 4096
  EXPECT_THROW(bad_t.validate(), Error);
}

TEST(HEParams, HashDistinguishesParameters) {
  HEParams a = HEParams::preset("small");
  HEParams b = a;
  EXPECT_EQ(a.hash(), b.hash());
  b.relin_decomp_bits = 20;
  EXPECT_NE(a.hash(), b.hash());
  std::stringstream ss;
  write_params(ss, a);
  EXPECT_EQ(read_params(ss), a);
}

TEST(PlainModulus, WideArithmeticMatchesGmp) {
  const u128 t = find_plain_prime(100, 2 * 1024);
  PlainModulus m(t);
  EXPECT_FALSE(m.is_word());
  Prng rng(11);
  const mpz_class tz = to_mpz(t);
  for (int i = 0; i < 500; ++i) {
    const u128 a = ((static_cast<u128>(rng()) << 64) | rng()) % t;
    const u128 b = ((static_cast<u128>(rng()) << 64) | rng()) % t;
    mpz_class expect = (to_mpz(a) * to_mpz(b)) % tz;
    ASSERT_EQ(to_mpz(m.mul(a, b)), expect);
    ASSERT_EQ(to_mpz(m.add(a, b)), (to_mpz(a) + to_mpz(b)) % tz);
    if (a != 0) {
      ASSERT_EQ(m.mul(a, m.inv(a)), 1u);
    }
  }
}

TEST(PlainNtt, WideModulusIsSlotIsomorphism) {
  const std::size_t n = 64;
  PlainModulus t(find_plain_prime(96, 2 * n));
  PlainNtt ntt(n, t);
  Prng rng(12);
  std::vector<u128> a(n), b(n);
  for (auto& v : a) v = ((static_cast<u128>(rng()) << 64) | rng()) % t.value();
  for (auto& v : b) v = ((static_cast<u128>(rng()) << 64) | rng()) % t.value();
  // Negacyclic convolution oracle.
  std::vector<mpz_class> c(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const mpz_class p = to_mpz(a[i]) * to_mpz(b[j]);
      if (i + j < n) c[i + j] += p; else c[i + j - n] -= p;
    }
  auto fa = a, fb = b;
  ntt.forward(fa);
  ntt.forward(fb);
  std::vector<u128> fc(n);
  for (std::size_t i = 0; i < n; ++i) fc[i] = t.mul(fa[i], fb[i]);
  ntt.inverse(fc);
  for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(fc[i], t.reduce(c[i]));
  ntt.inverse(fa);
  EXPECT_EQ(fa, a);
}

TEST(RnsTool, ScaleAndRoundIsExact) {
  for (u128 t : {static_cast<u128>(12289), find_plain_prime(90, 2048)}) {
    auto ring = polyring::RingParams::create(1024, choose_coeff_moduli(1024, 120));
    RnsTool tool(ring, PlainModulus(t));
    const mpz_class q = ring->q();
    const mpz_class qp = q * tool.p_ring()->q();
    const mpz_class bound = 1024 * q * q / 2;
    Prng rng(13);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(14);
    std::vector<mpz_class> e(1024);
    for (auto& v : e) v = gr.get_z_range(2 * bound) - bound;
    std::vector<std::uint64_t> eq(ring->size() * 1024), ep(tool.p_ring()->size() * 1024);
    for (std::size_t c = 0; c < 1024; ++c) {
      ring->base().decompose(e[c], eq.data() + c, 1024);
      tool.p_ring()->base().decompose(e[c], ep.data() + c, 1024);
    }
    polyring::RingElement out(ring);
    tool.scale_and_round(eq.data(), ep.data(), out);
    const mpz_class tz = to_mpz(t);
    for (std::size_t c = 0; c < 1024; ++c) {
      // round(t*e/q) = floor((2*t*e + q) / (2q))
      mpz_class num = 2 * tz * e[c] + q, den = 2 * q, r;
      mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
      ASSERT_EQ(out.coeff(c), r) << "coefficient " << c;
    }
    (void)qp;
  }
}

TEST(RnsTool, LiftIsCentered) {
  auto ring = polyring::RingParams::create(1024, choose_coeff_moduli(1024, 120));
  RnsTool tool(ring, PlainModulus(12289));
  Prng rng(15);
  auto x = polyring::RingElement(ring);
  for (std::size_t i = 0; i < ring->size(); ++i)
    for (auto& v : x.residue(i)) v = rng.uniform_below(ring->modulus(i).value());
  std::vector<std::uint64_t> out(tool.p_ring()->size() * 1024);
  tool.lift_to_p(x, out.data());
  for (std::size_t c = 0; c < 1024; ++c) {
    const mpz_class centered = x.coeff_centered(c);
    for (std::size_t j = 0; j < tool.p_ring()->size(); ++j) {
      ASSERT_EQ(out[j * 1024 + c], mod_u64(centered, tool.p_ring()->modulus(j).value()));
    }
  }
}

TEST(Scheme, TensorMatchesTextbookOracle) {
  const auto& f = fixture("tiny");
  const auto& ctx = *f.ctx;
  Prng rng(16);
  auto a = encrypt(f.keys.pk, random_plain(ctx, rng), rng);
  auto b = encrypt(f.keys.pk, random_plain(ctx, rng), rng);
  auto prod = eval_mul_no_relin(a, b);
  ASSERT_EQ(prod.size(), 3u);
  const std::size_t n = ctx.n();
  const mpz_class q = ctx.ring()->q(), t = ctx.t().as_mpz();
  auto lift = [&](const Ciphertext& c, std::size_t k) {
    std::vector<mpz_class> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = c[k].coeff_centered(j);
    return v;
  };
  std::vector<std::vector<mpz_class>> la{lift(a, 0), lift(a, 1)}, lb{lift(b, 0), lift(b, 1)};
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<mpz_class> e(n, 0);
    for (std::size_t i = 0; i < 2; ++i) {
      if (k < i || k - i > 1) continue;
      const auto& x = la[i];
      const auto& y = lb[k - i];
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          if (u + v < n) e[u + v] += x[u] * y[v]; else e[u + v - n] -= x[u] * y[v];
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class num = 2 * t * e[j] + q, den = 2 * q, r;
      mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
      ASSERT_EQ(prod[k].coeff(j), r) << "part " << k << " coefficient " << j;
    }
  }
}

TEST(Scheme, KeygenIsRandomizedAndPublicKeyEncryptsZero) {
  auto ctx = fixture("small").ctx;
  Prng r1(1), r2(2);
  auto k1 = keygen(ctx, r1);
  auto k2 = keygen(ctx, r2);
  EXPECT_FALSE(k1.sk.s == k2.sk.s);
  Ciphertext pk_ct(ctx, 2);
  pk_ct[0] = k1.pk.p0;
  pk_ct[1] = k1.pk.p1;
  pk_ct[0].to_coefficient();
  pk_ct[1].to_coefficient();
  auto r = decrypt_checked(k1.sk, pk_ct);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.plain, Plaintext(ctx->n()));
  EXPECT_EQ(k1.rlk.keys.size(), ctx->relin_key_count());
}

TEST(Scheme, RoundTripBoundaries) {
  for (const char* name : {"small", "medium"}) {
    const auto& f = fixture(name);
    Prng rng(17);
    Plaintext zero(f.ctx->n());
    EXPECT_EQ(decrypt(f.keys.sk, encrypt(f.keys.pk, zero, rng)), zero);
    Plaintext top(f.ctx->n());
    for (auto& c : top.coeffs) c = f.ctx->t().value() - 1;
    EXPECT_EQ(decrypt(f.keys.sk, encrypt(f.keys.pk, top, rng)), top);
    for (int i = 0; i < 100; ++i) {
      auto p = random_plain(*f.ctx, rng);
      ASSERT_EQ(decrypt(f.keys.sk, encrypt(f.keys.pk, p, rng)), p);
    }
  }
}

TEST(Scheme, FreshBudgetPositiveAtMedium) {
  const auto& f = fixture("medium");
  Prng rng(18);
  auto ct = encrypt(f.keys.pk, random_plain(*f.ctx, rng), rng);
  EXPECT_GT(noise_budget(f.keys.sk, ct), 0);
}

TEST(Scheme, AdditionMatchesOracle) {
  const auto& f = fixture("small");
  const auto& ctx = *f.ctx;
  BatchEncoder enc(f.ctx);
  Prng rng(19);
  for (int i = 0; i < 100; ++i) {
    auto m1 = random_plain(ctx, rng), m2 = random_plain(ctx, rng);
    auto c1 = encrypt(f.keys.pk, m1, rng), c2 = encrypt(f.keys.pk, m2, rng);
    Plaintext sum(ctx.n()), diff(ctx.n());
    for (std::size_t j = 0; j < ctx.n(); ++j) {
      sum.coeffs[j] = ctx.t().add(m1.coeffs[j], m2.coeffs[j]);
      diff.coeffs[j] = ctx.t().sub(m1.coeffs[j], m2.coeffs[j]);
    }
    ASSERT_EQ(decrypt(f.keys.sk, eval_add(c1, c2)), sum);
    ASSERT_EQ(decrypt(f.keys.sk, eval_sub(c1, c2)), diff);
    ASSERT_EQ(decrypt(f.keys.sk, eval_add_plain(c1, m2)), sum);
  }
  Plaintext zero(ctx.n());
  auto c = encrypt(f.keys.pk, random_plain(ctx, rng), rng);
  EXPECT_EQ(decrypt(f.keys.sk, eval_add(c, encrypt(f.keys.pk, zero, rng))),
            decrypt(f.keys.sk, c));
  // Slotwise sums.
  for (int i = 0; i < 100; ++i) {
    auto u = random_slots(ctx, rng), v = random_slots(ctx, rng);
    auto s = enc.decode(decrypt(f.keys.sk, eval_add(encrypt(f.keys.pk, enc.encode(u), rng),
                                                    encrypt(f.keys.pk, enc.encode(v), rng))));
    for (std::size_t j = 0; j < ctx.n(); ++j) ASSERT_EQ(s[j], ctx.t().add(u[j], v[j]));
  }
}

TEST(Scheme, ScaleAndParameterChecks) {
  const auto& f = fixture("small");
  const auto& g = fixture("tiny");
  Prng rng(20);
  auto a = encrypt(f.keys.pk, Plaintext(f.ctx->n()), rng);
  auto b = a;
  b.set_scale(mpq_class(3, 2));
  EXPECT_THROW(eval_add(a, b), Error);
  Plaintext p(f.ctx->n());
  p.scale = 2;
  EXPECT_THROW(eval_add_plain(a, p), Error);
  EXPECT_EQ(eval_mul_plain(b, p).scale(), mpq_class(3));
  auto c = encrypt(g.keys.pk, Plaintext(g.ctx->n()), rng);
  EXPECT_THROW(eval_add(a, c), Error);
  EXPECT_THROW(decrypt(g.keys.sk, a), Error);
  EXPECT_THROW(b.set_scale(0), Error);
}

TEST(Scheme, MultiplicationMatchesOracle) {
  const auto& f = fixture("small");
  const auto& ctx = *f.ctx;
  Prng rng(21);
  for (int i = 0; i < 10; ++i) {
    auto m1 = random_plain(ctx, rng), m2 = random_plain(ctx, rng);
    auto c1 = encrypt(f.keys.pk, m1, rng), c2 = encrypt(f.keys.pk, m2, rng);
    const auto expect = plain_mul(ctx, m1, m2);
    auto prod = eval_mul(c1, c2, f.keys.rlk);
    EXPECT_EQ(prod.size(), 2u);
    ASSERT_EQ(decrypt(f.keys.sk, prod), expect);
    ASSERT_EQ(decrypt(f.keys.sk, eval_mul_no_relin(c1, c2)), expect);
    ASSERT_EQ(decrypt(f.keys.sk, eval_mul_plain(c1, m2)), expect);
  }
  // Multiplicative identity at scale 1.
  Plaintext one(ctx.n());
  one.coeffs[0] = 1;
  auto m = random_plain(ctx, rng);
  auto c = encrypt(f.keys.pk, m, rng);
  EXPECT_EQ(decrypt(f.keys.sk, eval_mul(c, encrypt(f.keys.pk, one, rng), f.keys.rlk)), m);
}

TEST(Scheme, SlotwiseProducts) {
  const auto& f = fixture("medium");
  const auto& ctx = *f.ctx;
  BatchEncoder enc(f.ctx);
  Prng rng(22);
  for (int i = 0; i < 50; ++i) {
    auto u = random_slots(ctx, rng), v = random_slots(ctx, rng);
    auto c = eval_mul(encrypt(f.keys.pk, enc.encode(u), rng),
                      encrypt(f.keys.pk, enc.encode(v), rng), f.keys.rlk);
    auto s = enc.decode(decrypt(f.keys.sk, c));
    for (std::size_t j = 0; j < ctx.n(); ++j) ASSERT_EQ(s[j], ctx.t().mul(u[j], v[j]));
  }
}

TEST(Scheme, BatchingRoundTripAndConstants) {
  const auto& f = fixture("medium");
  const auto& ctx = *f.ctx;
  BatchEncoder enc(f.ctx);
  std::vector<u128> ramp(ctx.n());
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = i % ctx.t().value();
  EXPECT_EQ(enc.decode(enc.encode(ramp)), ramp);
  // A constant vector encodes to the scalar plaintext and behaves identically.
  std::vector<u128> sevens(ctx.n(), 7);
  EXPECT_EQ(enc.encode(sevens), enc.constant(7));
  Prng rng(23);
  auto u = random_slots(ctx, rng);
  auto c = encrypt(f.keys.pk, enc.encode(u), rng);
  auto via_scalar = enc.decode(decrypt(f.keys.sk, eval_mul_plain(c, enc.constant(7))));
  auto via_vector = enc.decode(decrypt(f.keys.sk, eval_mul_plain(c, enc.encode(sevens))));
  EXPECT_EQ(via_scalar, via_vector);
  auto add_scalar = enc.decode(decrypt(f.keys.sk, eval_add_plain(c, enc.constant(7))));
  auto add_vector = enc.decode(decrypt(f.keys.sk, eval_add_plain(c, enc.encode(sevens))));
  EXPECT_EQ(add_scalar, add_vector);
  for (std::size_t j = 0; j < ctx.n(); ++j) ASSERT_EQ(via_scalar[j], ctx.t().mul(u[j], 7));
  EXPECT_THROW(enc.encode(std::vector<u128>(ctx.n() + 1, 0)), Error);
}

TEST(Noise, MultiplicationConsumesBudget) {
  const auto& f = fixture("medium");
  Prng rng(24);
  BatchEncoder enc(f.ctx);
  double add_cost = 0, mul_cost = 0;
  for (int i = 0; i < 20; ++i) {
    auto a = encrypt(f.keys.pk, random_plain(*f.ctx, rng), rng);
    auto b = encrypt(f.keys.pk, random_plain(*f.ctx, rng), rng);
    const int ba = noise_budget(f.keys.sk, a), bb = noise_budget(f.keys.sk, b);
    const int prod = noise_budget(f.keys.sk, eval_mul(a, b, f.keys.rlk));
    const int sum = noise_budget(f.keys.sk, eval_add(a, b));
    const int plain = noise_budget(f.keys.sk, eval_mul_plain(a, enc.constant(1000)));
    EXPECT_LT(prod, std::min(ba, bb));
    EXPECT_LE(sum, std::min(ba, bb));
    EXPECT_GT(plain, prod);
    add_cost += std::min(ba, bb) - sum;
    mul_cost += std::min(ba, bb) - prod;
  }
  EXPECT_LT(add_cost / 20, 2.0);
  EXPECT_GT(mul_cost / 20, 5.0);
}

TEST(Noise, StaircaseAndExhaustion) {
  const auto& f = fixture("medium");
  const auto& ctx = *f.ctx;
  BatchEncoder enc(f.ctx);
  Prng rng(25);
  auto m = random_slots(ctx, rng);
  auto c = encrypt(f.keys.pk, enc.encode(m), rng);
  auto cur = c;
  auto expect = m;
  int prev = noise_budget(f.keys.sk, cur);
  bool failed = false;
  for (int k = 1; k <= 8; ++k) {
    cur = eval_mul(cur, c, f.keys.rlk);
    for (std::size_t j = 0; j < ctx.n(); ++j) expect[j] = ctx.t().mul(expect[j], m[j]);
    auto r = decrypt_checked(f.keys.sk, cur);
    EXPECT_LE(r.noise_budget, prev);
    if (prev > 0) {
      EXPECT_LT(r.noise_budget, prev);
    }
    prev = r.noise_budget;
    if (r.ok) {
      ASSERT_EQ(enc.decode(r.plain), expect) << "after " << k << " multiplications";
    } else {
      EXPECT_NE(enc.decode(r.plain), expect);
      EXPECT_THROW(decrypt(f.keys.sk, cur), Error);
      failed = true;
      break;
    }
  }
  EXPECT_TRUE(failed);
}

TEST(Serialization, ByteExactRoundTrip) {
  const auto& f = fixture("small");
  Prng rng(26);
  auto ct = eval_mul_plain(encrypt(f.keys.pk, random_plain(*f.ctx, rng), rng),
                           BatchEncoder(f.ctx).constant(3));
  ct.set_scale(mpq_class("1267650600228229401496703205376/3"));
  std::stringstream s1;
  write_ciphertext(s1, ct);
  auto back = read_ciphertext(s1, f.ctx);
  EXPECT_EQ(back, ct);
  std::stringstream s2;
  write_ciphertext(s2, back);
  EXPECT_EQ(s1.str(), s2.str());
  EXPECT_EQ(s1.str().substr(0, 4), "BFC1");

  std::stringstream kp, ks, kr;
  write_public_key(kp, f.keys.pk);
  write_secret_key(ks, f.keys.sk);
  write_relin_keys(kr, f.keys.rlk);
  const std::string kp_bytes = kp.str();
  EXPECT_EQ(kp_bytes.substr(0, 4), "BFK1");
  auto pk = read_public_key(kp, f.ctx);
  auto sk = read_secret_key(ks, f.ctx);
  auto rlk = read_relin_keys(kr, f.ctx);
  std::stringstream kp2;
  write_public_key(kp2, pk);
  EXPECT_EQ(kp2.str(), kp_bytes);
  EXPECT_EQ(sk.s, f.keys.sk.s);
  EXPECT_EQ(rlk.keys.size(), f.keys.rlk.keys.size());

  std::stringstream wrong_kind(kp_bytes);
  EXPECT_THROW(read_secret_key(wrong_kind, f.ctx), Error);
  std::stringstream truncated(s1.str().substr(0, 100));
  EXPECT_THROW(read_ciphertext(truncated, f.ctx), Error);
  std::stringstream bad_magic("XXXX" + s1.str().substr(4));
  EXPECT_THROW(read_ciphertext(bad_magic, f.ctx), Error);
  std::stringstream other_params(s1.str());
  EXPECT_THROW(read_ciphertext(other_params, fixture("tiny").ctx), Error);
}

// Random circuits of bounded multiplicative depth against a plaintext replay.
void run_circuits(const std::string& preset, int depth, int circuits,
                  std::uint64_t max_const) {
  const auto& f = fixture(preset);
  const auto& ctx = *f.ctx;
  BatchEncoder enc(f.ctx);
  Prng rng(27 + depth);
  for (int c = 0; c < circuits; ++c) {
    struct Node { Ciphertext ct; std::vector<u128> val; int depth; };
    std::vector<Node> nodes;
    for (int i = 0; i < 3; ++i) {
      auto v = random_slots(ctx, rng);
      nodes.push_back({encrypt(f.keys.pk, enc.encode(v), rng), v, 0});
    }
    for (int step = 0; step < 6; ++step) {
      const auto& a = nodes[rng.uniform_below(nodes.size())];
      const auto& b = nodes[rng.uniform_below(nodes.size())];
      const auto op = rng.uniform_below(4);
      Node out{a.ct, a.val, a.depth};
      if (op == 0) {
        out.ct = eval_add(a.ct, b.ct);
        for (std::size_t j = 0; j < ctx.n(); ++j) out.val[j] = ctx.t().add(a.val[j], b.val[j]);
        out.depth = std::max(a.depth, b.depth);
      } else if (op == 1 && std::max(a.depth, b.depth) < depth) {
        out.ct = eval_mul(a.ct, b.ct, f.keys.rlk);
        for (std::size_t j = 0; j < ctx.n(); ++j) out.val[j] = ctx.t().mul(a.val[j], b.val[j]);
        out.depth = std::max(a.depth, b.depth) + 1;
      } else if (op == 2) {
        const u128 k = rng.uniform_below(max_const);
        out.ct = eval_mul_plain(a.ct, enc.constant(to_mpz(k)));
        for (auto& v : out.val) v = ctx.t().mul(v, k);
      } else {
        auto p = random_slots(ctx, rng);
        out.ct = eval_add_plain(a.ct, enc.encode(p));
        for (std::size_t j = 0; j < ctx.n(); ++j) out.val[j] = ctx.t().add(out.val[j], p[j]);
      }
      nodes.push_back(std::move(out));
    }
    for (const auto& node : nodes) {
      auto r = decrypt_checked(f.keys.sk, node.ct);
      ASSERT_TRUE(r.ok) << preset << " circuit " << c;
      ASSERT_EQ(enc.decode(r.plain), node.val) << preset << " circuit " << c;
    }
  }
}

TEST(Homomorphism, RandomCircuitsSmall) { run_circuits("small", 1, 50, 4); }
TEST(Homomorphism, RandomCircuitsMedium) { run_circuits("medium", 3, 50, 1000); }
TEST(Homomorphism, RandomCircuitsLarge) { run_circuits("large", 6, 50, 1000); }

}  // namespace
}  // namespace hecnn::she
