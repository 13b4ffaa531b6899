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

#include "hecnn/nn/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hecnn/common/errors.hpp"

namespace hecnn::nn {

namespace {

constexpr char kMagic[4] = {'B', 'F', 'N', 'N'};
constexpr std::uint16_t kVersion = 1;
const std::string kMetaNetwork = "meta.network=";
const std::string kMetaActivation = "meta.activation=";

struct Shapes {
  std::vector<std::size_t> w, b;
  std::size_t fan_in = 0, fan_out = 0;
};

Shapes shapes_for(const LayerSpec& l) {
  Shapes s;
  if (l.kind == LayerKind::kConv) {
    const std::size_t cin = l.in_shape[2];
    s.w = {l.window, l.window, cin, l.filters};
    s.b = {l.filters};
    s.fan_in = l.window * l.window * cin;
    s.fan_out = l.window * l.window * l.filters;
  } else {
    const std::size_t in = shape_size(l.in_shape);
    s.w = {l.units, in};
    s.b = {l.units};
    s.fan_in = in;
    s.fan_out = l.units;
  }
  return s;
}

bool has_params(const LayerSpec& l) {
  return l.kind == LayerKind::kConv || l.kind == LayerKind::kFc;
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tensor(std::vector<std::uint8_t>& out, const std::string& name, const Tensor& t) {
  if (name.size() > 0xFFFF) throw usage_error("tensor name too long: " + name);
  put16(out, static_cast<std::uint16_t>(name.size()));
  out.insert(out.end(), name.begin(), name.end());
  put32(out, static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) put32(out, static_cast<std::uint32_t>(d));
  for (double v : t.data()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  std::uint64_t uint(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  std::string str(std::size_t len) {
    need(len);
    std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  b_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
    pos_ += len;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw data_error("truncated model file");
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

Tensor scalar(double v) { return Tensor({1}, std::vector<double>{v}); }

}  // namespace

Model Model::zeros(const NetworkConfig& config) {
  Model m;
  for (const auto& l : config.layers) {
    if (!has_params(l)) continue;
    const auto s = shapes_for(l);
    m.params[l.name + ".w"] = Tensor(s.w);
    m.params[l.name + ".b"] = Tensor(s.b);
  }
  m.meta.network = config.name;
  const auto acts = config.activations();
  if (!acts.empty()) m.meta.activation = acts.front()->activation.to_string();
  return m;
}

Model Model::glorot(const NetworkConfig& config, Prng& rng) {
  Model m = zeros(config);
  for (const auto& l : config.layers) {
    if (!has_params(l)) continue;
    const auto s = shapes_for(l);
    const double limit = std::sqrt(6.0 / static_cast<double>(s.fan_in + s.fan_out));
    for (double& v : m.params[l.name + ".w"].data()) v = (2 * rng.uniform01() - 1) * limit;
  }
  return m;
}

const Tensor& Model::at(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw usage_error("model has no tensor '" + key + "'");
  return it->second;
}

void Model::check(const NetworkConfig& config) const {
  std::size_t expected = 0;
  for (const auto& l : config.layers) {
    if (!has_params(l)) continue;
    const auto s = shapes_for(l);
    for (const auto& [key, shape] : {std::pair{l.name + ".w", s.w}, std::pair{l.name + ".b", s.b}}) {
      const Tensor& t = at(key);
      if (t.shape() != shape) {
        throw usage_error("tensor " + key + " has shape " + shape_string(t.shape()) +
                          " but layer " + l.name + " expects " + shape_string(shape));
      }
      ++expected;
    }
  }
  if (expected != params.size()) {
    throw usage_error("model has " + std::to_string(params.size()) + " tensors, network " +
                      config.name + " expects " + std::to_string(expected));
  }
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [k, t] : params) n += t.size();
  return n;
}

std::vector<std::uint8_t> Model::serialize() const {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put16(out, kVersion);
  put16(out, static_cast<std::uint16_t>(params.size() + 6));
  for (const auto& [name, t] : params) put_tensor(out, name, t);
  put_tensor(out, kMetaNetwork + meta.network, Tensor({0}));
  put_tensor(out, kMetaActivation + meta.activation, Tensor({0}));
  put_tensor(out, "meta.seed_hi", scalar(static_cast<double>(meta.seed >> 32)));
  put_tensor(out, "meta.seed_lo", scalar(static_cast<double>(meta.seed & 0xFFFFFFFFu)));
  put_tensor(out, "meta.epochs", scalar(meta.epochs));
  put_tensor(out, "meta.accuracy", scalar(meta.accuracy));
  return out;
}

Model Model::deserialize(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.str(4) != std::string(kMagic, 4)) throw data_error("not a model file (bad magic)");
  const auto version = r.uint(2);
  if (version != kVersion) throw data_error("unsupported model version " + std::to_string(version));
  const auto count = r.uint(2);
  Model m;
  std::uint64_t seed_hi = 0, seed_lo = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string name = r.str(r.uint(2));
    const auto rank = r.uint(4);
    std::vector<std::size_t> shape;
    for (std::uint64_t d = 0; d < rank; ++d) shape.push_back(r.uint(4));
    std::vector<double> data(shape_size(shape));
    for (double& v : data) {
      const std::uint64_t bits = r.uint(8);
      std::memcpy(&v, &bits, 8);
    }
    if (name.rfind(kMetaNetwork, 0) == 0) {
      m.meta.network = name.substr(kMetaNetwork.size());
    } else if (name.rfind(kMetaActivation, 0) == 0) {
      m.meta.activation = name.substr(kMetaActivation.size());
    } else if (name.rfind("meta.", 0) == 0) {
      const double v = data.empty() ? 0 : data[0];
      if (name == "meta.seed_hi") seed_hi = static_cast<std::uint64_t>(v);
      if (name == "meta.seed_lo") seed_lo = static_cast<std::uint64_t>(v);
      if (name == "meta.epochs") m.meta.epochs = static_cast<std::uint32_t>(v);
      if (name == "meta.accuracy") m.meta.accuracy = v;
    } else {
      m.params[name] = Tensor(std::move(shape), std::move(data));
    }
  }
  if (!r.done()) throw data_error("trailing bytes after model tensors");
  m.meta.seed = (seed_hi << 32) | seed_lo;
  return m;
}

void Model::save(const std::string& path) const {
  const auto bytes = serialize();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw data_error("cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw data_error("failed writing " + path);
}

Model Model::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw data_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), {});
  return deserialize(bytes);
}

}  // namespace hecnn::nn
