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
#include <vector>

namespace hecnn::cli {

// Every setting a subcommand can take. The config file is flat key=value
// text using the same keys as the long flags (with '-' for '_').
struct RunConfig {
  std::string preset = "medium";
  std::string t_bits = "0";  // 0 = preset default, "auto" = sized from the shadow
  std::string net = "infer-fig3";
  std::string activation = "poly:relu:3:-10:10";
  int input_scale_bits = 8;
  int weight_scale_bits = 10;
  int coeff_scale_bits = 0;
  std::uint64_t seed = 1;
  int threads = 1;

  int epochs = 10;
  double lr = 0.01;
  double momentum = 0.9;
  int batch = 64;
  int train_size = 10000;
  int test_size = 1000;

  std::string data_dir;  // empty = HECNN_MNIST_DIR or the default location
  std::string model;
  std::string keys;
  std::string batch_file;
  std::string logits;
  std::string out;
  std::string csv;
  std::string predictions;

  int images = 1;
  int offset = 0;
  int headroom_bits = 2;
  int calib_images = 500;

  static const std::vector<std::string>& keys_list();

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  // Parses key=value lines; '#' starts a comment; blank lines are ignored.
  void merge_text(const std::string& text);
  void merge_file(const std::string& path);
  std::string to_text() const;

  bool operator==(const RunConfig& o) const { return to_text() == o.to_text(); }
};

std::string flag_name(const std::string& key);

}  // namespace hecnn::cli
