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

#include "hecnn/cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>
#include <utility>

#include "hecnn/common/errors.hpp"

namespace hecnn::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw usage_error("invalid value '" + v + "' for " + key);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field number_field(T RunConfig::*member, const std::string& key) {
  return {[member, key](RunConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field string_field(std::string RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = v; },
          [member](const RunConfig& c) { return c.*member; }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> f = {
      {"preset", string_field(&RunConfig::preset)},
      {"t_bits", string_field(&RunConfig::t_bits)},
      {"net", string_field(&RunConfig::net)},
      {"activation", string_field(&RunConfig::activation)},
      {"input_scale_bits", number_field(&RunConfig::input_scale_bits, "input_scale_bits")},
      {"weight_scale_bits", number_field(&RunConfig::weight_scale_bits, "weight_scale_bits")},
      {"coeff_scale_bits", number_field(&RunConfig::coeff_scale_bits, "coeff_scale_bits")},
      {"seed", number_field(&RunConfig::seed, "seed")},
      {"threads", number_field(&RunConfig::threads, "threads")},
      {"epochs", number_field(&RunConfig::epochs, "epochs")},
      {"lr", number_field(&RunConfig::lr, "lr")},
      {"momentum", number_field(&RunConfig::momentum, "momentum")},
      {"batch", number_field(&RunConfig::batch, "batch")},
      {"train_size", number_field(&RunConfig::train_size, "train_size")},
      {"test_size", number_field(&RunConfig::test_size, "test_size")},
      {"data_dir", string_field(&RunConfig::data_dir)},
      {"model", string_field(&RunConfig::model)},
      {"keys", string_field(&RunConfig::keys)},
      {"batch_file", string_field(&RunConfig::batch_file)},
      {"logits", string_field(&RunConfig::logits)},
      {"out", string_field(&RunConfig::out)},
      {"csv", string_field(&RunConfig::csv)},
      {"predictions", string_field(&RunConfig::predictions)},
      {"images", number_field(&RunConfig::images, "images")},
      {"offset", number_field(&RunConfig::offset, "offset")},
      {"headroom_bits", number_field(&RunConfig::headroom_bits, "headroom_bits")},
      {"calib_images", number_field(&RunConfig::calib_images, "calib_images")},
  };
  return f;
}

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return f;
  }
  throw usage_error("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& RunConfig::keys_list() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& entry : fields()) k.push_back(entry.first);
    return k;
  }();
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  std::string k = key;
  for (char& ch : k) {
    if (ch == '-') ch = '_';
  }
  field(k).set(*this, value);
}

std::string RunConfig::get(const std::string& key) const { return field(key).get(*this); }

void RunConfig::merge_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw usage_error("config line " + std::to_string(lineno) + ": expected key=value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str());
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + "=" + f.get(*this) + "\n";
  return out;
}

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  for (char& ch : f) {
    if (ch == '_') ch = '-';
  }
  return f;
}

}  // namespace hecnn::cli
