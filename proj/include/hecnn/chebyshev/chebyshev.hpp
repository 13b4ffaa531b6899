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

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hecnn::chebyshev {

enum class FuncId { kRelu, kSigmoid, kCustom };

using RealFn = std::function<double(double)>;

double relu(double x);
double sigmoid(double x);
// "relu" or "sigmoid"; throws a usage error otherwise.
FuncId parse_func(const std::string& name);
std::string func_name(FuncId id);
RealFn function_for(FuncId id);

struct ChebApprox {
  FuncId func = FuncId::kCustom;
  int degree = 0;
  double a = -1, b = 1;
  int nodes = 0;  // sample count used by the fit
  std::vector<double> cheb_coeffs;  // f ~ sum c_k T_k(u), u in [-1, 1]
  std::vector<double> mono_coeffs;  // f ~ sum m_k x^k, x in [a, b]

  // Affine map [a, b] -> [-1, 1].
  double to_unit(double x) const { return (2 * x - a - b) / (b - a); }
  bool contains(double x) const { return x >= a && x <= b; }
};

// T_k(x) via T_{k+1} = 2x T_k - T_{k-1}, T_0 = 1, T_1 = x.
double cheb_poly(int k, double x);

// Samples f at `nodes` Chebyshev-Gauss points mapped to [a, b] and projects
// onto T_0..T_d. With nodes == d + 1 (the default, nodes <= 0) this is
// interpolation at the Chebyshev points; with many more nodes it converges
// to the truncated Chebyshev series.
ChebApprox fit(const RealFn& f, int degree, double a, double b, int nodes = 0,
               FuncId id = FuncId::kCustom);
ChebApprox fit(FuncId id, int degree, double a, double b, int nodes = 0);

// Exact conversion of Chebyshev coefficients to monomials in x on [a, b],
// using rational arithmetic and one final rounding per coefficient.
std::vector<double> cheb_to_monomial(const std::vector<double>& cheb, double a,
                                     double b);

// Clenshaw evaluation of the Chebyshev form. Points outside [a, b] are
// still evaluated; `extrapolated` reports it.
double eval(const ChebApprox& approx, double x, bool* extrapolated = nullptr);
double horner(const std::vector<double>& mono, double x);
// Derivative of the monomial form.
double horner_derivative(const std::vector<double>& mono, double x);

struct ErrorReport {
  double e_max = 0;
  double argmax = 0;
  std::vector<std::pair<double, double>> samples;  // (x, f(x) - p(x))
};

// E(x) = f(x) - p(x) on a uniform grid of grid_size points over [a, b].
ErrorReport max_error(const ChebApprox& approx, const RealFn& f, int grid_size);

struct TableRow {
  double x, f, p, diff;
};
std::vector<TableRow> error_table(const ChebApprox& approx, const RealFn& f,
                                  const std::vector<double>& xs);

}  // namespace hecnn::chebyshev
