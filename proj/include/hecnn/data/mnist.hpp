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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hecnn/common/errors.hpp"
#include "hecnn/nn/tensor.hpp"

namespace hecnn::data {

enum class IdxFailure { kIo, kBadMagic, kTruncated, kCountMismatch, kBadShape };

class IdxError : public Error {
 public:
  IdxError(IdxFailure failure, const std::string& message)
      : Error(ErrorKind::kData, message), failure_(failure) {}
  IdxFailure failure() const { return failure_; }

 private:
  IdxFailure failure_;
};

struct Dataset {
  std::vector<nn::Tensor> images;  // 28x28x1, values in [0, 1]
  std::vector<int> labels;         // 0..9
  std::string name;

  std::size_t size() const { return images.size(); }
  // First `count` examples as a new dataset.
  Dataset head(std::size_t count) const;
};

// Big-endian IDX files (magic 0x803 images, 0x801 labels); gzip-compressed
// files are detected and inflated transparently. Pixels are divided by 255.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Disjoint, seed-deterministic train/test subsets.
std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t train_n,
                                  std::size_t test_n, std::uint64_t seed);

// Directory holding the four official MNIST files: $HECNN_MNIST_DIR or
// /root/data/mnist.
std::string default_mnist_dir();
bool mnist_available(const std::string& dir);
Dataset load_mnist_train(const std::string& dir);
Dataset load_mnist_test(const std::string& dir);

}  // namespace hecnn::data
