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

#include "hecnn/encinfer/planner.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "hecnn/common/errors.hpp"
#include "hecnn/common/parallel.hpp"

namespace hecnn::encinfer {

namespace {

double log2_mpz(const mpz_class& v) {
  if (v == 0) return -INFINITY;
  long e = 0;
  const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log2(std::abs(m)) + static_cast<double>(e);
}

double linear_cost(const encoding::QuantizedLayer& q, const mpz_class& t) {
  const auto& l = q.spec;
  const std::size_t rows = l.kind == nn::LayerKind::kConv ? l.filters : l.units;
  const std::size_t per_row = q.weights.size() / rows;
  mpz_class worst = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < per_row; ++i) {
      // Conv weights are laid out (window, window, in, filters).
      const auto& w = l.kind == nn::LayerKind::kConv ? q.weights[i * rows + r] : q.weights[r * per_row + i];
      s += abs(encoding::center_mod(w, t));
    }
    if (s > worst) worst = s;
  }
  return std::max(0.0, log2_mpz(worst));
}

}  // namespace

encoding::ShadowResult calibrate(const encoding::QuantizedNetwork& net,
                                 const std::vector<nn::Tensor>& images, int headroom_bits,
                                 int threads) {
  if (images.empty()) throw usage_error("calibration needs at least one image");
  std::vector<encoding::ShadowResult> parts(images.size());
  parallel_for(images.size(), threads,
               [&](std::size_t i) { parts[i] = encoding::shadow_eval(net, images[i]); });
  encoding::ShadowResult r;
  for (const auto& p : parts) r.absorb(p);
  const mpz_class t = net.fp.t_mpz();
  r.overflow = false;
  r.first_overflow.clear();
  for (auto& l : r.layers) {
    l.overflow = !encoding::fits(mpz_class(l.max_magnitude << headroom_bits), t);
    if (l.overflow && !r.overflow) {
      r.overflow = true;
      r.first_overflow = l.name;
    }
  }
  return r;
}

int required_t_bits(const encoding::ShadowResult& shadow, int headroom_bits) {
  const int bits = shadow.max_magnitude == 0
                       ? 0
                       : static_cast<int>(mpz_sizeinbase(shadow.max_magnitude.get_mpz_t(), 2));
  return bits + headroom_bits + 2;
}

NoisePlan plan_noise(const she::HEParams& params, const encoding::QuantizedNetwork& net,
                     const encoding::ShadowResult& magnitudes) {
  NoisePlan plan;
  const double log_q = params.coeff_modulus_bits();
  const mpz_class t = to_mpz(params.t);
  const double log_t = log2_mpz(t);
  const double log_n = std::log2(static_cast<double>(params.n));
  plan.fresh_budget = std::floor(log_q - 1 - std::max(2 * log_t, log_t + log_n + 4));
  plan.mult_cost = log_t + log_n - 1;
  double budget = plan.fresh_budget;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& q = net.layers[i];
    PlanStep step;
    step.layer = q.spec.name;
    step.budget_before = budget;
    switch (q.spec.kind) {
      case nn::LayerKind::kConv:
      case nn::LayerKind::kFc:
        budget -= linear_cost(q, t);
        break;
      case nn::LayerKind::kPool:
        budget -= std::log2(static_cast<double>(q.spec.window * q.spec.window));
        break;
      case nn::LayerKind::kActivation: {
        double after = budget;
        for (std::size_t k = 1; k < q.poly.coeffs.size(); ++k) {
          const mpz_class c = encoding::center_mod(q.poly.coeffs[k], t);
          if (c == 0) continue;
          const double depth = std::ceil(std::log2(static_cast<double>(k)));
          after = std::min(after, budget - depth * plan.mult_cost - std::max(0.0, log2_mpz(c)));
        }
        budget = after;
        break;
      }
      case nn::LayerKind::kSoftmax:
        break;
    }
    budget = std::floor(budget);
    step.budget_after = budget;
    if (i + 1 < magnitudes.layers.size()) step.overflow = magnitudes.layers[i + 1].overflow;
    if (step.overflow && !plan.overflow) {
      plan.overflow = true;
      plan.overflow_at = step.layer;
    }
    if (budget <= 0 && !plan.exhausted) {
      plan.exhausted = true;
      plan.exhausted_at = step.layer;
    }
    plan.steps.push_back(step);
  }
  return plan;
}

std::string NoisePlan::summary() const {
  std::ostringstream os;
  os << "planner: fresh budget " << fresh_budget << " bits, " << std::fixed << std::setprecision(0)
     << mult_cost << " bits per ciphertext multiplication\n";
  for (const auto& s : steps) {
    os << "  " << std::left << std::setw(6) << s.layer << " predicted budget " << std::right
       << std::setw(5) << std::max(s.budget_before, 0.0) << " -> " << std::setw(5) << std::max(s.budget_after, 0.0)
       << (s.overflow ? "  (integer overflow)" : "") << "\n";
  }
  if (exhausted) {
    os << "planner: noise budget exhausted at layer " << exhausted_at << "\n";
  } else {
    os << "planner: budget suffices, " << steps.back().budget_after << " bits predicted at the output\n";
  }
  if (overflow) os << "planner: plaintext modulus overflow first at layer " << overflow_at << "\n";
  return os.str();
}

}  // namespace hecnn::encinfer
