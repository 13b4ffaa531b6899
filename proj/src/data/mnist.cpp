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

#include "hecnn/data/mnist.hpp"

#include <zlib.h>

#include <cstdlib>
#include <filesystem>

#include "hecnn/common/prng.hpp"

namespace hecnn::data {

namespace {

std::vector<unsigned char> read_all(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw IdxError(IdxFailure::kIo, "cannot open " + path);
  std::vector<unsigned char> out;
  unsigned char buf[1 << 16];
  int got;
  while ((got = gzread(f, buf, sizeof buf)) > 0) out.insert(out.end(), buf, buf + got);
  int errnum = 0;
  const char* msg = gzerror(f, &errnum);
  gzclose(f);
  if (got < 0 || (errnum != Z_OK && errnum != Z_BUF_ERROR)) {
    throw IdxError(IdxFailure::kTruncated,
                   "truncated or corrupt compressed file " + path + ": " + msg);
  }
  return out;
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t off,
                   const std::string& path) {
  if (b.size() < off + 4) {
    throw IdxError(IdxFailure::kTruncated, "truncated IDX header in " + path);
  }
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

}  // namespace

Dataset Dataset::head(std::size_t count) const {
  Dataset out;
  out.name = name;
  count = std::min(count, size());
  out.images.assign(images.begin(), images.begin() + static_cast<std::ptrdiff_t>(count));
  out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto img = read_all(images_path);
  const auto lab = read_all(labels_path);
  if (be32(img, 0, images_path) != 0x00000803) {
    throw IdxError(IdxFailure::kBadMagic, "bad magic number in image file " + images_path);
  }
  if (be32(lab, 0, labels_path) != 0x00000801) {
    throw IdxError(IdxFailure::kBadMagic, "bad magic number in label file " + labels_path);
  }
  const std::size_t count = be32(img, 4, images_path);
  const std::size_t rows = be32(img, 8, images_path);
  const std::size_t cols = be32(img, 12, images_path);
  const std::size_t label_count = be32(lab, 4, labels_path);
  if (rows != 28 || cols != 28) {
    throw IdxError(IdxFailure::kBadShape, "expected 28x28 images in " + images_path);
  }
  if (count != label_count) {
    throw IdxError(IdxFailure::kCountMismatch,
                   "count mismatch: " + std::to_string(count) + " images vs " +
                       std::to_string(label_count) + " labels");
  }
  if (img.size() < 16 + count * rows * cols) {
    throw IdxError(IdxFailure::kTruncated, "truncated image data in " + images_path);
  }
  if (lab.size() < 8 + count) {
    throw IdxError(IdxFailure::kTruncated, "truncated label data in " + labels_path);
  }
  Dataset ds;
  ds.name = images_path;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    nn::Tensor t({rows, cols, 1});
    const unsigned char* p = img.data() + 16 + i * rows * cols;
    for (std::size_t j = 0; j < rows * cols; ++j) t[j] = p[j] / 255.0;
    ds.images.push_back(std::move(t));
    const int label = lab[8 + i];
    if (label > 9) throw IdxError(IdxFailure::kBadShape, "label out of range in " + labels_path);
    ds.labels.push_back(label);
  }
  return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t train_n,
                                  std::size_t test_n, std::uint64_t seed) {
  if (train_n + test_n > ds.size()) {
    throw data_error("split requests " + std::to_string(train_n + test_n) +
                     " examples but the dataset has " + std::to_string(ds.size()));
  }
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Prng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.uniform_below(i)]);
  }
  Dataset train, test;
  train.name = ds.name + ":train";
  test.name = ds.name + ":test";
  for (std::size_t i = 0; i < train_n + test_n; ++i) {
    Dataset& dst = i < train_n ? train : test;
    dst.images.push_back(ds.images[idx[i]]);
    dst.labels.push_back(ds.labels[idx[i]]);
  }
  return {std::move(train), std::move(test)};
}

std::string default_mnist_dir() {
  const char* env = std::getenv("HECNN_MNIST_DIR");
  return env && *env ? env : "/root/data/mnist";
}

namespace {

std::string pick(const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  for (const auto& name : {stem, stem + ".gz"}) {
    if (fs::exists(fs::path(dir) / name)) return (fs::path(dir) / name).string();
  }
  return (fs::path(dir) / stem).string();
}

}  // namespace

bool mnist_available(const std::string& dir) {
  namespace fs = std::filesystem;
  for (const char* stem : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                           "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"}) {
    if (!fs::exists(pick(dir, stem))) return false;
  }
  return true;
}

Dataset load_mnist_train(const std::string& dir) {
  return load_idx(pick(dir, "train-images-idx3-ubyte"), pick(dir, "train-labels-idx1-ubyte"));
}

Dataset load_mnist_test(const std::string& dir) {
  return load_idx(pick(dir, "t10k-images-idx3-ubyte"), pick(dir, "t10k-labels-idx1-ubyte"));
}

}  // namespace hecnn::data
