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

#include <gmpxx.h>

#include <string>

#include "hecnn/common/bigint.hpp"

namespace hecnn::encoding {

using Scale = mpq_class;

struct FixedPointConfig {
  int input_scale_bits = 8;
  int weight_scale_bits = 10;
  // Extra bits on the leading coefficient of each activation polynomial.
  int coeff_scale_bits = 0;
  u128 t = 0;

  Scale input_scale() const;
  Scale weight_scale() const;
  mpz_class t_mpz() const { return to_mpz(t); }
  // Throws a usage error for negative bit counts or t < 2.
  void validate() const;
};

struct ScaledInteger {
  mpz_class value;  // centered representative in (-t/2, t/2]
  Scale scale;
};

// Nearest integer, ties away from zero.
mpz_class round_nearest(const mpq_class& v);
// Exact rational value of a finite double.
mpq_class exact(double v);
// Representative of v mod t in (-t/2, t/2].
mpz_class center_mod(const mpz_class& v, const mpz_class& t);
// True when v lies in (-t/2, t/2], i.e. survives reduction mod t unchanged.
bool fits(const mpz_class& v, const mpz_class& t);

// round(v * scale); throws a data error naming the magnitude when the result
// does not fit in (-t/2, t/2].
ScaledInteger encode_real(double v, const Scale& scale, u128 t);
double decode_real(const ScaledInteger& si);
double decode(const mpz_class& value, const Scale& scale);

std::string scale_string(const Scale& s);
// log2 of a positive rational, for reports.
double log2_of(const mpq_class& v);

}  // namespace hecnn::encoding
