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

#include "hecnn/chebyshev/chebyshev.hpp"

#include <gmpxx.h>

#include <cmath>
#include <numbers>

#include "hecnn/common/errors.hpp"

namespace hecnn::chebyshev {

double relu(double x) { return x > 0 ? x : 0.0; }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

FuncId parse_func(const std::string& name) {
  if (name == "relu") return FuncId::kRelu;
  if (name == "sigmoid") return FuncId::kSigmoid;
  throw usage_error("unknown function '" + name + "' (expected relu or sigmoid)");
}

std::string func_name(FuncId id) {
  switch (id) {
    case FuncId::kRelu: return "relu";
    case FuncId::kSigmoid: return "sigmoid";
    default: return "custom";
  }
}

RealFn function_for(FuncId id) {
  switch (id) {
    case FuncId::kRelu: return relu;
    case FuncId::kSigmoid: return sigmoid;
    default: throw usage_error("custom functions have no built-in definition");
  }
}

double cheb_poly(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int i = 1; i < k; ++i) {
    const double next = 2 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> cheb_to_monomial(const std::vector<double>& cheb, double a,
                                     double b) {
  const std::size_t d1 = cheb.size();
  // Monomial coefficients of T_k in u, built by the recurrence.
  std::vector<std::vector<mpz_class>> t(d1);
  for (std::size_t k = 0; k < d1; ++k) {
    t[k].assign(d1, 0);
    if (k == 0) {
      t[k][0] = 1;
    } else if (k == 1) {
      t[k][1] = 1;
    } else {
      for (std::size_t j = 0; j < d1; ++j) {
        if (j > 0) t[k][j] += 2 * t[k - 1][j - 1];
        t[k][j] -= t[k - 2][j];
      }
    }
  }
  std::vector<mpq_class> in_u(d1, 0);
  for (std::size_t k = 0; k < d1; ++k) {
    const mpq_class c(cheb[k]);
    for (std::size_t j = 0; j <= k; ++j) in_u[j] += c * t[k][j];
  }
  // u = alpha x + beta.
  const mpq_class qa(a), qb(b);
  const mpq_class alpha = mpq_class(2) / (qb - qa);
  const mpq_class beta = -(qa + qb) / (qb - qa);
  std::vector<mpq_class> in_x(d1, 0);
  std::vector<mpq_class> power(1, 1);  // (alpha x + beta)^j
  for (std::size_t j = 0; j < d1; ++j) {
    for (std::size_t i = 0; i < power.size(); ++i) in_x[i] += in_u[j] * power[i];
    std::vector<mpq_class> next(power.size() + 1, 0);
    for (std::size_t i = 0; i < power.size(); ++i) {
      next[i] += power[i] * beta;
      next[i + 1] += power[i] * alpha;
    }
    power = std::move(next);
  }
  std::vector<double> out(d1);
  for (std::size_t i = 0; i < d1; ++i) out[i] = in_x[i].get_d();
  return out;
}

ChebApprox fit(const RealFn& f, int degree, double a, double b, int nodes,
               FuncId id) {
  if (degree < 0) throw usage_error("degree must be non-negative");
  if (!(a < b)) throw usage_error("interval requires a < b");
  const int count = nodes > 0 ? nodes : degree + 1;
  if (count < degree + 1) throw usage_error("need at least degree + 1 nodes");
  ChebApprox out;
  out.func = id;
  out.degree = degree;
  out.a = a;
  out.b = b;
  out.nodes = count;
  std::vector<double> fu(static_cast<std::size_t>(count)), u(fu.size());
  for (int j = 0; j < count; ++j) {
    u[j] = std::cos(std::numbers::pi * (j + 0.5) / count);
    const double x = 0.5 * (b - a) * u[j] + 0.5 * (b + a);
    fu[j] = f(x);
    if (!std::isfinite(fu[j])) {
      throw data_error("function value is not finite at x=" + std::to_string(x));
    }
  }
  out.cheb_coeffs.resize(static_cast<std::size_t>(degree) + 1);
  for (int k = 0; k <= degree; ++k) {
    long double s = 0;
    for (int j = 0; j < count; ++j) {
      s += static_cast<long double>(fu[j]) *
           std::cos(std::numbers::pi * k * (j + 0.5) / count);
    }
    double c = static_cast<double>(2 * s / count);
    if (k == 0) c *= 0.5;
    out.cheb_coeffs[k] = c;
  }
  out.mono_coeffs = cheb_to_monomial(out.cheb_coeffs, a, b);
  return out;
}

ChebApprox fit(FuncId id, int degree, double a, double b, int nodes) {
  return fit(function_for(id), degree, a, b, nodes, id);
}

double eval(const ChebApprox& approx, double x, bool* extrapolated) {
  if (extrapolated) *extrapolated = !approx.contains(x);
  const double u = approx.to_unit(x);
  double b1 = 0, b2 = 0;
  for (int k = approx.degree; k >= 1; --k) {
    const double b0 = 2 * u * b1 - b2 + approx.cheb_coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + approx.cheb_coeffs[0];
}

double horner(const std::vector<double>& mono, double x) {
  double r = 0;
  for (auto it = mono.rbegin(); it != mono.rend(); ++it) r = r * x + *it;
  return r;
}

double horner_derivative(const std::vector<double>& mono, double x) {
  double r = 0;
  for (std::size_t k = mono.size(); k-- > 1;) r = r * x + static_cast<double>(k) * mono[k];
  return r;
}

ErrorReport max_error(const ChebApprox& approx, const RealFn& f, int grid_size) {
  if (grid_size < 100) throw usage_error("grid_size must be at least 100");
  ErrorReport r;
  r.samples.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    const double x = approx.a + (approx.b - approx.a) * i / (grid_size - 1);
    const double e = f(x) - eval(approx, x);
    r.samples.emplace_back(x, e);
    if (std::abs(e) > r.e_max) {
      r.e_max = std::abs(e);
      r.argmax = x;
    }
  }
  return r;
}

std::vector<TableRow> error_table(const ChebApprox& approx, const RealFn& f,
                                  const std::vector<double>& xs) {
  std::vector<TableRow> rows;
  for (double x : xs) {
    const double fx = f(x), px = eval(approx, x);
    rows.push_back({x, fx, px, px - fx});
  }
  return rows;
}

}  // namespace hecnn::chebyshev
