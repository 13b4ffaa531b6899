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

#include "hecnn/nn/network.hpp"

#include <cmath>
#include <sstream>

#include "hecnn/common/errors.hpp"

namespace hecnn::nn {

namespace {

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) out.push_back(part);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw usage_error("invalid " + what + " '" + s + "'");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ActivationSpec ActivationSpec::poly(chebyshev::FuncId func, int degree, double a, double b) {
  ActivationSpec s;
  s.kind = ActKind::kPoly;
  s.approx = chebyshev::fit(func, degree, a, b);
  return s;
}

ActivationSpec ActivationSpec::parse(const std::string& text) {
  if (text == "relu") return {};
  if (text == "sigmoid") {
    ActivationSpec s;
    s.kind = ActKind::kSigmoid;
    return s;
  }
  const auto parts = split_colon(text);
  if (parts.size() != 5 || parts[0] != "poly") {
    throw usage_error("activation must be relu, sigmoid or poly:<func>:<degree>:<a>:<b>, got '" +
                      text + "'");
  }
  const double degree = parse_double(parts[2], "degree");
  if (degree < 1 || degree != std::floor(degree)) {
    throw usage_error("polynomial degree must be a positive integer, got '" + parts[2] + "'");
  }
  return poly(chebyshev::parse_func(parts[1]), static_cast<int>(degree),
              parse_double(parts[3], "interval bound"), parse_double(parts[4], "interval bound"));
}

std::string ActivationSpec::to_string() const {
  switch (kind) {
    case ActKind::kRelu:
      return "relu";
    case ActKind::kSigmoid:
      return "sigmoid";
    case ActKind::kPoly:
      return "poly:" + chebyshev::func_name(approx.func) + ":" + std::to_string(approx.degree) +
             ":" + fmt(approx.a) + ":" + fmt(approx.b);
  }
  return "";
}

double ActivationSpec::apply(double x) const {
  switch (kind) {
    case ActKind::kRelu:
      return x > 0 ? x : 0;
    case ActKind::kSigmoid:
      return chebyshev::sigmoid(x);
    case ActKind::kPoly:
      return chebyshev::horner(approx.mono_coeffs, x);
  }
  return 0;
}

double ActivationSpec::derivative(double x) const {
  switch (kind) {
    case ActKind::kRelu:
      return x > 0 ? 1 : 0;
    case ActKind::kSigmoid: {
      const double s = chebyshev::sigmoid(x);
      return s * (1 - s);
    }
    case ActKind::kPoly:
      return chebyshev::horner_derivative(approx.mono_coeffs, x);
  }
  return 0;
}

std::string layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv:
      return "conv";
    case LayerKind::kActivation:
      return "activation";
    case LayerKind::kPool:
      return "pool";
    case LayerKind::kFc:
      return "fc";
    case LayerKind::kSoftmax:
      return "softmax";
  }
  return "";
}

void NetworkConfig::build() {
  if (input_shape.size() != 3) throw usage_error("network input must be height x width x channels");
  std::vector<std::size_t> shape = input_shape;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& l = layers[i];
    const std::string where = "layer " + l.name + " (" + layer_kind_name(l.kind) + ")";
    l.in_shape = shape;
    switch (l.kind) {
      case LayerKind::kConv:
      case LayerKind::kPool: {
        if (shape.size() != 3) throw usage_error(where + " needs a 3-d input, got " + shape_string(shape));
        if (l.window == 0 || l.stride == 0) throw usage_error(where + " needs a window and stride");
        const std::size_t pad = l.kind == LayerKind::kConv ? l.padding : 0;
        for (int d = 0; d < 2; ++d) {
          const std::size_t span = shape[d] + 2 * pad;
          if (span < l.window || (span - l.window) % l.stride != 0) {
            throw usage_error(where + ": window " + std::to_string(l.window) + " stride " +
                              std::to_string(l.stride) + " does not tile input " +
                              shape_string(shape));
          }
        }
        const std::size_t h = (shape[0] + 2 * pad - l.window) / l.stride + 1;
        const std::size_t w = (shape[1] + 2 * pad - l.window) / l.stride + 1;
        if (l.kind == LayerKind::kConv) {
          if (l.filters == 0) throw usage_error(where + " needs at least one filter");
          shape = {h, w, l.filters};
        } else {
          shape = {h, w, shape[2]};
        }
        break;
      }
      case LayerKind::kFc:
        if (l.units == 0) throw usage_error(where + " needs at least one unit");
        shape = {l.units};
        break;
      case LayerKind::kActivation:
        break;
      case LayerKind::kSoftmax:
        if (shape.size() != 1) throw usage_error(where + " needs a flat input");
        if (i + 1 != layers.size()) throw usage_error(where + " must be the last layer");
        break;
    }
    l.out_shape = shape;
  }
}

const std::vector<std::size_t>& NetworkConfig::output_shape() const {
  return layers.empty() ? input_shape : layers.back().out_shape;
}

bool NetworkConfig::has_softmax() const {
  return !layers.empty() && layers.back().kind == LayerKind::kSoftmax;
}

std::vector<const LayerSpec*> NetworkConfig::activations() const {
  std::vector<const LayerSpec*> out;
  for (const auto& l : layers) {
    if (l.kind == LayerKind::kActivation) out.push_back(&l);
  }
  return out;
}

void NetworkConfig::set_activation(const ActivationSpec& act) {
  for (auto& l : layers) {
    if (l.kind == LayerKind::kActivation) l.activation = act;
  }
}

namespace {

LayerSpec conv(const std::string& name, std::size_t filters) {
  LayerSpec l;
  l.kind = LayerKind::kConv;
  l.name = name;
  l.window = 5;
  l.stride = 1;
  l.padding = 2;
  l.filters = filters;
  return l;
}

LayerSpec act(const std::string& name, const ActivationSpec& a) {
  LayerSpec l;
  l.kind = LayerKind::kActivation;
  l.name = name;
  l.activation = a;
  return l;
}

LayerSpec pool(const std::string& name) {
  LayerSpec l;
  l.kind = LayerKind::kPool;
  l.name = name;
  l.window = 2;
  l.stride = 2;
  return l;
}

LayerSpec fc(const std::string& name, std::size_t units) {
  LayerSpec l;
  l.kind = LayerKind::kFc;
  l.name = name;
  l.units = units;
  return l;
}

}  // namespace

std::vector<std::string> NetworkConfig::preset_names() { return {"train-fig2", "infer-fig3"}; }

NetworkConfig NetworkConfig::preset(const std::string& name, const ActivationSpec& a) {
  NetworkConfig c;
  c.name = name;
  c.input_shape = {28, 28, 1};
  if (name == "train-fig2") {
    c.layers = {conv("conv1", 5), act("act1", a), pool("pool1"), conv("conv2", 10),
                act("act2", a), pool("pool2"), fc("fc1", 128), act("act3", a), fc("fc2", 10)};
    LayerSpec sm;
    sm.kind = LayerKind::kSoftmax;
    sm.name = "softmax";
    c.layers.push_back(sm);
  } else if (name == "infer-fig3") {
    c.layers = {conv("conv1", 5), act("act1", a), pool("pool1"), conv("conv2", 10),
                pool("pool2"), fc("fc1", 128), act("act2", a), fc("fc2", 10)};
  } else {
    throw usage_error("unknown network '" + name + "' (expected train-fig2 or infer-fig3)");
  }
  c.build();
  return c;
}

}  // namespace hecnn::nn
