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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hecnn/chebyshev/chebyshev.hpp"
#include "hecnn/common/errors.hpp"
#include "hecnn/common/prng.hpp"

namespace hecnn::chebyshev {
namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(ChebPoly, BaseCasesAndRecurrence) {
  EXPECT_EQ(cheb_poly(0, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(cheb_poly(2, 0.5), -0.5);
  EXPECT_DOUBLE_EQ(cheb_poly(1, 0.3), 0.3);
}

TEST(ChebPoly, TrigonometricIdentity) {
  Prng rng(1);
  for (int i = 0; i < 100; ++i) {
    const int k = static_cast<int>(rng.uniform_below(13));
    const double theta = rng.uniform01() * std::numbers::pi;
    EXPECT_NEAR(cheb_poly(k, std::cos(theta)), std::cos(k * theta), 1e-12);
  }
}

TEST(Fit, IdentityIsItsOwnSeries) {
  auto a = fit([](double x) { return x; }, 1, -1, 1);
  EXPECT_NEAR(a.cheb_coeffs[0], 0, 1e-15);
  EXPECT_NEAR(a.cheb_coeffs[1], 1, 1e-15);
  EXPECT_NEAR(a.mono_coeffs[0], 0, 1e-15);
  EXPECT_NEAR(a.mono_coeffs[1], 1, 1e-15);
}

TEST(Fit, ReluSeriesMatchesClosedForm) {
  // ReLU = (x + |x|) / 2 and |x| = 2/pi + (4/(3 pi)) T_2 - ...
  auto a = fit(FuncId::kRelu, 4, -1, 1, 2048);
  EXPECT_NEAR(a.cheb_coeffs[0], 1 / std::numbers::pi, 1e-6);
  EXPECT_NEAR(a.cheb_coeffs[1], 0.5, 1e-6);
  EXPECT_NEAR(a.cheb_coeffs[2], 2 / (3 * std::numbers::pi), 1e-6);
}

TEST(Fit, MonomialCoefficientsMatchPublishedTables) {
  EXPECT_LT(rel(fit(FuncId::kRelu, 7, -10, 10).mono_coeffs[6], 3.66197231323541e-6), 0.05);
  EXPECT_LT(rel(fit(FuncId::kRelu, 9, -10, 10).mono_coeffs[8], -7.03111115816643e-8), 0.05);
  EXPECT_LT(rel(fit(FuncId::kSigmoid, 7, -10, 10).mono_coeffs[7], -4.34913635838155e-7), 0.05);
  EXPECT_LT(rel(fit(FuncId::kSigmoid, 9, -10, 10).mono_coeffs[9], 9.32721914680041e-9), 0.05);
  EXPECT_LT(rel(fit(FuncId::kRelu, 7, -100, 100).mono_coeffs[6], 3.6619723132354e-11), 0.05);
  EXPECT_LT(rel(fit(FuncId::kRelu, 9, -100, 100).mono_coeffs[8], -7.03111115816644e-15), 0.05);
  EXPECT_LT(rel(fit(FuncId::kSigmoid, 7, -100, 100).mono_coeffs[7], -8.15672916212668e-14), 0.05);
  EXPECT_LT(rel(fit(FuncId::kSigmoid, 9, -100, 100).mono_coeffs[9], 2.59190909648308e-17), 0.05);
}

TEST(Fit, InterpolationReproducesPublishedErrorTable) {
  // Degree 9 on [-5, 5]; values printed to six decimals.
  const std::vector<double> xs{-4, -3, -2, -1, 1, 2, 3, 4};
  const std::vector<double> sig{0.016360, 0.049098, 0.118340, 0.268522,
                                0.731478, 0.881660, 0.950902, 0.983640};
  const std::vector<double> rl{-0.008871, 0.014340, -0.015085, -0.026883,
                               0.973117, 1.984915, 3.014340, 3.991129};
  auto s = fit(FuncId::kSigmoid, 9, -5, 5);
  auto r = fit(FuncId::kRelu, 9, -5, 5);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(eval(s, xs[i]), sig[i], 1.5e-6) << "x=" << xs[i];
    EXPECT_NEAR(eval(r, xs[i]), rl[i], 1.5e-6) << "x=" << xs[i];
  }
  EXPECT_NEAR(eval(s, 1.0), 0.731059, 4e-3);
}

TEST(Fit, TruncatedSeriesModeDiffersFromInterpolation) {
  auto interp = fit(FuncId::kRelu, 7, -10, 10);
  auto series = fit(FuncId::kRelu, 7, -10, 10, 2048);
  EXPECT_EQ(interp.nodes, 8);
  EXPECT_EQ(series.nodes, 2048);
  EXPECT_GT(rel(series.mono_coeffs[6], interp.mono_coeffs[6]), 0.2);
}

TEST(Fit, Validation) {
  EXPECT_THROW(fit(FuncId::kRelu, 3, 1, 1), Error);
  EXPECT_THROW(fit(FuncId::kRelu, 3, 2, 1), Error);
  EXPECT_THROW(fit([](double x) { return x > 0.5 ? NAN : x; }, 3, -1, 1), Error);
  EXPECT_THROW(fit([](double x) { return std::exp(1000 * x); }, 2, 0, 1, 64), Error);
  EXPECT_THROW(parse_func("tanh"), Error);
}

TEST(Eval, ConstantAndExtrapolationFlag) {
  auto c = fit([](double) { return 3.0; }, 0, -2, 2);
  bool extra = true;
  EXPECT_DOUBLE_EQ(eval(c, 1.5, &extra), 3.0);
  EXPECT_FALSE(extra);
  EXPECT_DOUBLE_EQ(eval(c, 7.0, &extra), 3.0);
  EXPECT_TRUE(extra);
}

TEST(Eval, ClenshawAgreesWithHorner) {
  Prng rng(2);
  for (FuncId id : {FuncId::kRelu, FuncId::kSigmoid}) {
    for (int d = 1; d <= 9; ++d) {
      for (double r : {1.0, 5.0, 10.0, 100.0}) {
        auto a = fit(id, d, -r, r);
        double scale = 0;
        for (double m : a.mono_coeffs) scale = std::max(scale, std::abs(m) * std::pow(r, &m - a.mono_coeffs.data()));
        for (int i = 0; i < 1000; ++i) {
          const double x = -r + 2 * r * rng.uniform01();
          const double c = eval(a, x), h = horner(a.mono_coeffs, x);
          ASSERT_LE(std::abs(c - h), 1e-9 * std::max(std::abs(c), 1e-3 * scale))
              << func_name(id) << " d=" << d << " r=" << r << " x=" << x;
        }
      }
    }
  }
}

TEST(MaxError, ExactDegreeFitIsExact) {
  auto cubic = [](double x) { return 2 * x * x * x - x + 0.25; };
  auto a = fit(cubic, 3, -3, 2);
  EXPECT_LE(max_error(a, cubic, 1000).e_max, 1e-9);
  EXPECT_THROW(max_error(a, cubic, 50), Error);
  auto rep = max_error(a, cubic, 100);
  EXPECT_EQ(rep.samples.size(), 100u);
  EXPECT_DOUBLE_EQ(rep.samples.front().first, -3);
  EXPECT_DOUBLE_EQ(rep.samples.back().first, 2);
}

TEST(MaxError, PublishedEnvelopeHoldsForSomeDegree) {
  const std::vector<double> xs{-4, -3, -2, -1, 1, 2, 3, 4};
  bool sig_ok = false, relu_ok = false;
  for (int d = 5; d <= 9; ++d) {
    auto s = fit(FuncId::kSigmoid, d, -5, 5);
    auto r = fit(FuncId::kRelu, d, -5, 5);
    double es = 0, er = 0;
    for (double x : xs) {
      es = std::max(es, std::abs(sigmoid(x) - eval(s, x)));
      er = std::max(er, std::abs(relu(x) - eval(r, x)));
    }
    sig_ok |= es <= 3.34e-3;
    relu_ok |= er <= 5.38e-2;
  }
  EXPECT_TRUE(sig_ok);
  EXPECT_TRUE(relu_ok);
}

TEST(MaxError, DegreeAndIntervalOrdering) {
  auto e = [](int d, double r) {
    return max_error(fit(FuncId::kRelu, d, -r, r), relu, 2001).e_max;
  };
  EXPECT_LT(e(9, 10), e(7, 10));
  EXPECT_LT(e(9, 10), e(9, 100));
  // ReLU is positively homogeneous: errors scale exactly with the radius.
  EXPECT_NEAR(e(9, 10) / 10, e(9, 100) / 100, 1e-12);
}

TEST(Invariants, ReluParity) {
  for (double r : {1.0, 5.0, 10.0, 100.0}) {
    for (int d : {3, 5, 7, 9}) {
      auto a = fit(FuncId::kRelu, d, -r, r);
      double mx = 0;
      for (double m : a.mono_coeffs) mx = std::max(mx, std::abs(m));
      EXPECT_LT(rel(a.mono_coeffs[1], 0.5), 1e-9);
      for (int k = 3; k <= d; k += 2) EXPECT_LE(std::abs(a.mono_coeffs[k]), 1e-12 * mx);
    }
  }
}

TEST(Invariants, SigmoidParity) {
  for (double r : {1.0, 5.0, 10.0, 100.0}) {
    for (int d : {3, 5, 7, 9}) {
      auto a = fit(FuncId::kSigmoid, d, -r, r);
      double mx = 0;
      for (double m : a.mono_coeffs) mx = std::max(mx, std::abs(m));
      EXPECT_LT(rel(a.mono_coeffs[0], 0.5), 1e-9);
      for (int k = 2; k <= d; k += 2) EXPECT_LE(std::abs(a.mono_coeffs[k]), 1e-12 * mx);
    }
  }
}

TEST(Invariants, ErrorSymmetry) {
  for (int d : {5, 7, 9}) {
    auto r = fit(FuncId::kRelu, d, -10, 10);
    auto s = fit(FuncId::kSigmoid, d, -10, 10);
    for (int i = 0; i <= 200; ++i) {
      const double x = 10.0 * i / 200;
      const double er = relu(x) - eval(r, x), erm = relu(-x) - eval(r, -x);
      const double es = sigmoid(x) - eval(s, x), esm = sigmoid(-x) - eval(s, -x);
      EXPECT_LE(std::abs(er - erm), 1e-9);
      EXPECT_LE(std::abs(es + esm), 1e-9);
    }
  }
}

TEST(Invariants, ReluScalingLaw) {
  for (int d : {5, 7, 9}) {
    for (double beta : {2.0, 10.0}) {
      auto base = fit(FuncId::kRelu, d, -10, 10);
      auto wide = fit(FuncId::kRelu, d, -10 * beta, 10 * beta);
      for (int k = 0; k <= d; k += (k == 0 ? 1 : (k == 1 ? 1 : 2))) {
        if (k >= 3 && k % 2 == 1) continue;
        const double want = std::pow(beta, 1 - k) * base.mono_coeffs[k];
        EXPECT_LT(rel(wide.mono_coeffs[k], want), 1e-6) << "d=" << d << " k=" << k;
      }
    }
  }
}

TEST(ErrorTable, DifferenceIsApproximationMinusFunction) {
  auto s = fit(FuncId::kSigmoid, 9, -5, 5);
  auto rows = error_table(s, sigmoid, {1.0});
  EXPECT_NEAR(rows[0].diff, 4.19e-4, 5e-7);
  EXPECT_NEAR(rows[0].f, 0.731059, 5e-7);
}

}  // namespace
}  // namespace hecnn::chebyshev
