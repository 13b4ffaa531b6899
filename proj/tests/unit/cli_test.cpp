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

#include "hecnn/cli/run_config.hpp"
#include "hecnn/common/errors.hpp"
#include "hecnn/common/prng.hpp"
#include "hecnn/encinfer/bundle.hpp"
#include "hecnn/she/batch_encoder.hpp"
#include "hecnn/she/encryptor.hpp"
#include "hecnn/she/keys.hpp"

namespace hecnn {
namespace {

using cli::RunConfig;

TEST(RunConfig, EchoRoundTrips) {
  RunConfig a;
  a.set("preset", "large");
  a.set("lr", "0.0025");
  a.set("t-bits", "auto");
  a.set("seed", "18446744073709551615");
  a.set("data_dir", "/tmp/some dir");
  RunConfig b;
  b.merge_text(a.to_text());
  EXPECT_EQ(a.to_text(), b.to_text());
  EXPECT_EQ(b.lr, 0.0025);
  EXPECT_EQ(b.seed, 18446744073709551615ull);
  EXPECT_EQ(b.data_dir, "/tmp/some dir");
}

TEST(RunConfig, DefaultsRoundTripAndCoverEveryKey) {
  RunConfig a;
  RunConfig b;
  b.merge_text(a.to_text());
  EXPECT_EQ(a, b);
  for (const auto& k : RunConfig::keys_list()) {
    EXPECT_NE(a.to_text().find(k + "="), std::string::npos) << k;
  }
}

TEST(RunConfig, CommentsBlankLinesAndErrors) {
  RunConfig c;
  c.merge_text("# comment\n\n  epochs = 3  # trailing\nactivation=poly:relu:7:-10:10\n");
  EXPECT_EQ(c.epochs, 3);
  EXPECT_EQ(c.activation, "poly:relu:7:-10:10");
  EXPECT_THROW(c.merge_text("epochs 3\n"), Error);
  EXPECT_THROW(c.merge_text("nope=1\n"), Error);
  EXPECT_THROW(c.merge_text("epochs=three\n"), Error);
  EXPECT_THROW(c.merge_text("epochs=\n"), Error);
}

TEST(RunConfig, FlagNames) {
  EXPECT_EQ(cli::flag_name("input_scale_bits"), "--input-scale-bits");
  EXPECT_EQ(cli::flag_name("seed"), "--seed");
}

TEST(Bundle, RoundTripKeepsScalesAndBatch) {
  auto ctx = she::SheContext::create(she::HEParams::preset("small"));
  Prng rng(1);
  const auto keys = she::keygen(ctx, rng);
  const she::BatchEncoder enc(ctx);
  encinfer::CtBundle b;
  b.batch_size = 7;
  for (int i = 0; i < 3; ++i) {
    auto ct = she::encrypt(keys.pk, enc.constant(i), rng);
    ct.set_scale(mpq_class(1 << i, 3));
    b.cts.push_back(std::move(ct));
  }
  std::stringstream ss;
  encinfer::write_bundle(ss, b);
  const auto r = encinfer::read_bundle(ss, ctx);
  EXPECT_EQ(r.batch_size, 7u);
  ASSERT_EQ(r.cts.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.cts[i], b.cts[i]);
  std::stringstream bad("XXXX");
  EXPECT_THROW(encinfer::read_bundle(bad, ctx), Error);
  std::stringstream truncated(ss.str().substr(0, 40));
  EXPECT_THROW(encinfer::read_bundle(truncated, ctx), Error);
}

}  // namespace
}  // namespace hecnn
