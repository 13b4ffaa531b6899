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
#include <functional>
#include <string>
#include <vector>

#include "hecnn/common/prng.hpp"
#include "hecnn/encoding/fixed_point.hpp"
#include "hecnn/encoding/quantize.hpp"
#include "hecnn/nn/tensor.hpp"
#include "hecnn/she/ciphertext.hpp"
#include "hecnn/she/keys.hpp"

namespace hecnn::encinfer {

using encoding::Scale;
using CtVec = std::vector<she::Ciphertext>;

// One ciphertext per pixel position; image i lives in slot i.
struct EncImageBatch {
  CtVec pixels;
  std::size_t batch_size = 0;
  Scale scale;
};

struct EncLogits {
  CtVec values;  // one per class
  std::size_t batch_size = 0;
  Scale scale;
};

struct OpCounts {
  std::size_t ct_mults = 0;     // ciphertext-ciphertext, each relinearized
  std::size_t plain_mults = 0;  // ciphertext-scalar
  std::size_t additions = 0;
  std::size_t max_depth = 0;    // ct-ct multiplicative depth

  void merge(const OpCounts& o);
};

struct LayerReport {
  std::string name;  // report row label
  std::string layer; // network layer name, or "encryption" / "decryption"
  std::string description;
  double seconds = 0;
  int nb_before = -1;  // -1 when no debug probe was supplied
  int nb_after = -1;
  std::size_t ct_count = 0;
  OpCounts ops;
};

// Debug-only hook, supplied by a caller holding the secret key: returns the
// minimum noise budget over (a sample of) the given ciphertexts.
using BudgetProbe = std::function<int(const CtVec&)>;
// Debug-only hook called on every power computed inside an activation.
using PowerCheck = std::function<void(int power, const she::Ciphertext&)>;

EncImageBatch encrypt_batch(const she::PublicKey& pk, const std::vector<nn::Tensor>& images,
                            const encoding::FixedPointConfig& fp, Prng& rng, int threads = 1);

CtVec conv_layer_enc(const CtVec& in, const encoding::QuantizedLayer& layer, int threads = 1,
                     OpCounts* ops = nullptr);
// Output o (flattened y, x, filter) of a convolution layer on its own.
she::Ciphertext conv_output(const CtVec& in, const encoding::QuantizedLayer& layer, std::size_t o,
                            OpCounts& ops);
CtVec pool_layer_enc(const CtVec& in, const encoding::QuantizedLayer& layer, int threads = 1,
                     OpCounts* ops = nullptr);
CtVec fc_layer_enc(const CtVec& in, const encoding::QuantizedLayer& layer, int threads = 1,
                   OpCounts* ops = nullptr);
CtVec activation_layer_enc(const CtVec& in, const encoding::QuantizedLayer& layer,
                           const she::RelinKeys& rlk, int threads = 1, OpCounts* ops = nullptr,
                           const PowerCheck& check = {});
CtVec apply_layer_enc(const CtVec& in, const encoding::QuantizedLayer& layer,
                      const she::RelinKeys& rlk, int threads = 1, OpCounts* ops = nullptr,
                      const PowerCheck& check = {});

// Evaluates the quantized polynomial on one ciphertext by splitting it into
// baby steps x..x^(k-1) and power-of-two giant steps x^k, x^2k, ...
she::Ciphertext eval_poly_enc(const she::Ciphertext& x, const encoding::QuantizedPoly& poly,
                              const she::RelinKeys& rlk, OpCounts* ops = nullptr,
                              const PowerCheck& check = {});

struct InferOptions {
  int threads = 1;
  BudgetProbe probe;              // debug only
  PowerCheck power_check;         // debug only
  // Evidence that no integer intermediate exceeds t/2; when null a static
  // interval bound over inputs in [0, 1] is used instead.
  const encoding::ShadowResult* certificate = nullptr;
  bool allow_overflow = false;    // diagnostics only
  // Called after each layer with its outputs (diagnostics and tests). When
  // unset, conv [-> activation] -> pool runs are evaluated window by window
  // without materializing the full-resolution intermediates.
  std::function<void(const encoding::QuantizedLayer&, const CtVec&)> on_layer;
  // Stop after this many layers (0 = all).
  std::size_t max_layers = 0;
};

struct InferResult {
  EncLogits logits;
  std::vector<LayerReport> reports;
  CtVec last;  // output of the last evaluated layer
};

// Runs the encrypted forward pass. Uses only public material (the
// quantized network and relinearization keys); refuses with a crypto error
// when the overflow evidence shows an intermediate outside (-t/2, t/2].
InferResult infer_encrypted(const encoding::QuantizedNetwork& net, const EncImageBatch& batch,
                            const she::RelinKeys& rlk, const InferOptions& options = {});

struct DecryptedLogits {
  std::vector<std::vector<double>> values;       // [image][class]
  std::vector<std::vector<mpz_class>> integers;  // [image][class], centered
  std::vector<int> predicted;
  int min_budget = 0;
  bool ok = false;  // every logit ciphertext had budget left
};

// Decodes at the accumulated scale; ties go to the lower class index.
DecryptedLogits decrypt_logits(const she::SecretKey& sk, const EncLogits& logits);

// Centered slot values [0, count) of a ciphertext; throws when exhausted.
std::vector<mpz_class> decrypt_slots(const she::SecretKey& sk, const she::Ciphertext& ct,
                                     std::size_t count);

// Worst-case integer magnitudes for inputs in [0, 1] by interval arithmetic.
encoding::ShadowResult static_bound(const encoding::QuantizedNetwork& net);

// Report row label for a layer ("1st convolution layer", ...).
std::string table_row_name(const encoding::QuantizedNetwork& net, std::size_t layer_index);
std::string layer_description(const encoding::QuantizedLayer& layer);

// Aligned text table: Layer | Description | Time(s) | NB-before | NB-after.
std::string format_report(const std::vector<LayerReport>& reports);
std::string format_report_csv(const std::vector<LayerReport>& reports);

}  // namespace hecnn::encinfer
