// Copyright 2026 The fedsched Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================
#include "fedsched/compress.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"

namespace fedsched {
namespace {

// Pascal's triangle: exact binomials for d <= 60.
std::vector<std::vector<std::uint64_t>> PascalTriangle(std::size_t max_d) {
  std::vector<std::vector<std::uint64_t>> c(max_d + 1);
  for (std::size_t n = 0; n <= max_d; ++n) {
    c[n].assign(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  return c;
}

// Full-sort reference for D-SGD.
SparseUpdate ReferenceDsgd(const std::vector<double>& v, std::size_t q) {
  const std::size_t d = v.size();
  std::vector<std::size_t> desc(d);
  std::iota(desc.begin(), desc.end(), std::size_t{0});
  std::sort(desc.begin(), desc.end(), [&](std::size_t a, std::size_t b) {
    return v[a] != v[b] ? v[a] > v[b] : a < b;
  });
  std::vector<std::size_t> kept(desc.begin(), desc.begin() + q);
  std::vector<std::size_t> rest(desc.begin() + q, desc.end());
  std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    return v[a] != v[b] ? v[a] < v[b] : a < b;
  });
  kept.insert(kept.end(), rest.begin(), rest.begin() + q);
  double ps = 0, ns = 0;
  int pn = 0, nn = 0;
  for (std::size_t i : kept) {
    if (v[i] > 0) ps += v[i], ++pn;
    if (v[i] < 0) ns += v[i], ++nn;
  }
  const double qp = pn ? ps / pn : 0.0, qn = nn ? ns / nn : 0.0;
  const bool pos = qp >= std::abs(qn);
  SparseUpdate out = SparseUpdate::Empty(d);
  std::sort(kept.begin(), kept.end());
  for (std::size_t i : kept) {
    if (pos ? v[i] > 0 : v[i] < 0) {
      out.indices.push_back(i);
      out.values.push_back(pos ? qp : qn);
    }
  }
  return out;
}

TEST(BitCostTest, DsgdExamples) {
  EXPECT_DOUBLE_EQ(BitCostDsgd(1000, 0), 33.0);
  EXPECT_DOUBLE_EQ(BitCostDsgd(4, 1), 35.0);
  EXPECT_NEAR(BitCostDsgd(10, 2), std::log2(45.0) + 33.0, 1e-12);
  EXPECT_NEAR(BitCostDsgd(10, 2), 38.4919, 1e-4);
}

TEST(BitCostTest, RandExamples) {
  EXPECT_DOUBLE_EQ(BitCostRand(1000, 0), 0.0);
  EXPECT_DOUBLE_EQ(BitCostRand(4, 1), 35.0);
  EXPECT_NEAR(BitCostRand(10, 2), std::log2(45.0) + 66.0, 1e-12);
  EXPECT_NEAR(BitCostRand(10, 2), 71.4919, 1e-4);
}

TEST(BitCostTest, RejectsQAboveD) {
  EXPECT_THROW(BitCostDsgd(5, 6), std::invalid_argument);
  EXPECT_THROW(BitCostRand(5, 6), std::invalid_argument);
}

TEST(BitCostTest, LogGammaMatchesExactBinomials) {
  const auto c = PascalTriangle(30);
  for (std::size_t d = 0; d <= 30; ++d) {
    for (std::size_t q = 0; q <= d; ++q) {
      const double exact = std::log2(static_cast<double>(c[d][q]));
      EXPECT_NEAR(Log2Binomial(d, q), exact, 1e-9) << d << " " << q;
      EXPECT_NEAR(BitCostDsgd(d, q), exact + 33.0, 1e-9);
      EXPECT_NEAR(BitCostRand(d, q), exact + 33.0 * q, 1e-9);
    }
  }
}

TEST(BitCostTest, StrictlyIncreasingOverSearchRange) {
  for (std::size_t d : {1u, 2u, 7u, 50u, 1001u}) {
    for (Scheme s : {Scheme::kDsgd, Scheme::kRand}) {
      for (std::size_t q = 1; q <= MaxSearchQ(s, d); ++q) {
        EXPECT_LT(BitCost(s, d, q - 1), BitCost(s, d, q)) << d << " " << q;
      }
    }
  }
}

TEST(MaxQTest, Examples) {
  EXPECT_EQ(MaxQ(4, 35.0, Scheme::kDsgd), 1u);
  EXPECT_EQ(MaxQ(4, 10.0, Scheme::kDsgd), 0u);
  EXPECT_EQ(MaxQ(100000, 10.0, Scheme::kDsgd), 0u);
  EXPECT_EQ(MaxQ(10, 71.4919, Scheme::kRand), 2u);
  EXPECT_EQ(MaxQ(10, 1e9, Scheme::kDsgd), 5u);
  EXPECT_EQ(MaxQ(10, 1e9, Scheme::kRand), 10u);
  EXPECT_EQ(MaxQ(10, 0.0, Scheme::kRand), 0u);
}

TEST(MaxQTest, BracketingOnRandomBudgets) {
  Rng rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 5000);
  std::uniform_real_distribution<double> frac(0.0, 1.1);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = dim(rng);
    for (Scheme s : {Scheme::kDsgd, Scheme::kRand}) {
      const double budget = frac(rng) * BitCost(s, d, MaxSearchQ(s, d));
      const std::size_t q = MaxQ(d, budget, s);
      if (q >= 1) EXPECT_LE(BitCost(s, d, q), budget);
      if (q < MaxSearchQ(s, d)) EXPECT_GT(BitCost(s, d, q + 1), budget);
    }
  }
}

TEST(DsgdQuantizeTest, Examples) {
  const std::vector<double> a = {3, -1, 2, 0};
  const SparseUpdate ua = DsgdQuantize(a, 1);
  EXPECT_EQ(ua.indices, (std::vector<std::size_t>{0}));
  EXPECT_EQ(ua.values, (std::vector<double>{3.0}));

  const std::vector<double> b = {3, -1, 2, -4};
  const SparseUpdate ub = DsgdQuantize(b, 1);
  EXPECT_EQ(ub.indices, (std::vector<std::size_t>{3}));
  EXPECT_EQ(ub.values, (std::vector<double>{-4.0}));

  const std::vector<double> zeros(8, 0.0);
  EXPECT_TRUE(DsgdQuantize(zeros, 3).empty());
  EXPECT_TRUE(DsgdQuantize(a, 0).empty());
}

TEST(DsgdQuantizeTest, SignTieGoesPositive) {
  const std::vector<double> v = {-2, 0, 2, 0};
  const SparseUpdate u = DsgdQuantize(v, 1);
  EXPECT_EQ(u.indices, (std::vector<std::size_t>{2}));
  EXPECT_EQ(u.values, (std::vector<double>{2.0}));
}

TEST(DsgdQuantizeTest, FewerWinningSignEntriesThanQ) {
  const std::vector<double> v = {5, -1, -2, -3, -4, -6};
  const SparseUpdate u = DsgdQuantize(v, 2);
  // top-2 = {5, -1}, bottom-2 = {-6, -4}; q+ = 5, q- = -11/3.
  EXPECT_EQ(u.indices, (std::vector<std::size_t>{0}));
  EXPECT_EQ(u.values, (std::vector<double>{5.0}));
}

TEST(DsgdQuantizeTest, Errors) {
  const std::vector<double> v = {1, 2, 3};
  EXPECT_THROW(DsgdQuantize(v, 2), std::invalid_argument);
  const std::vector<double> bad = {1, NAN, 3, 4};
  EXPECT_THROW(DsgdQuantize(bad, 1), std::invalid_argument);
}

TEST(DsgdQuantizeTest, MatchesFullSortReferenceWithTies) {
  Rng rng(5);
  std::uniform_int_distribution<int> val(-4, 4);
  std::uniform_int_distribution<std::size_t> dim(2, 40);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t d = dim(rng);
    std::vector<double> v(d);
    for (double& x : v) x = val(rng);
    std::uniform_int_distribution<std::size_t> qd(1, d / 2);
    const std::size_t q = qd(rng);
    const SparseUpdate got = DsgdQuantize(v, q);
    const SparseUpdate want = ReferenceDsgd(v, q);
    EXPECT_EQ(got.indices, want.indices);
    EXPECT_EQ(got.values, want.values);
    got.Validate();
    EXPECT_LE(got.nnz(), 2 * q);
    for (double x : got.values) {
      EXPECT_EQ(x, got.values.front());
      EXPECT_NE(x, 0.0);
    }
  }
}

TEST(UniformQuantizer32Test, ErrorWithinHalfStep) {
  const double scale = 3.7;
  const UniformQuantizer32 quant(scale);
  Rng rng(11);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    EXPECT_LE(std::abs(quant.RoundTrip(x) - x), std::ldexp(scale, -31));
  }
  EXPECT_EQ(quant.RoundTrip(scale), scale);
  EXPECT_EQ(quant.RoundTrip(-scale), -scale);
  EXPECT_EQ(quant.RoundTrip(0.0), 0.0);
}

TEST(RandSparsifyTest, Boundaries) {
  Rng rng(1);
  const std::vector<double> v = {0.5, -1.25, 2.0, 0.0, -0.75};
  EXPECT_TRUE(RandSparsify(v, 0, rng).empty());
  const SparseUpdate all = RandSparsify(v, v.size(), rng);
  EXPECT_EQ(all.indices, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(all.values[i], v[i], std::ldexp(2.0, -31));
  }
  EXPECT_THROW(RandSparsify(v, 6, rng), std::invalid_argument);
}

TEST(RandSparsifyTest, UnbiasedScaledByRho) {
  const std::size_t d = 20, q = 5, draws = 100000;
  std::vector<double> g(d);
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = (i % 2 ? -1.0 : 1.0) * (0.2 + 0.09 * static_cast<double>(i));
  }
  Rng rng(2718);
  std::vector<double> mean(d, 0.0);
  double norm_sq = 0.0;
  for (std::size_t r = 0; r < draws; ++r) {
    const SparseUpdate u = RandSparsify(g, q, rng);
    ASSERT_EQ(u.nnz(), q);
    u.AddTo(mean);
    norm_sq += SparseL2Norm(u) * SparseL2Norm(u);
  }
  const double rho = static_cast<double>(q) / d;
  double g_sq = 0.0;
  // Per-coordinate standard error is |g_i| sqrt(rho (1 - rho) / draws).
  const double se = std::sqrt(rho * (1.0 - rho) / draws);
  for (std::size_t i = 0; i < d; ++i) {
    EXPECT_NEAR(mean[i] / draws, rho * g[i], 5.0 * se * std::abs(g[i]));
    g_sq += g[i] * g[i];
  }
  EXPECT_NEAR(norm_sq / draws, rho * g_sq, 0.01 * rho * g_sq);
}

TEST(SparseL2NormTest, Examples) {
  EXPECT_EQ(SparseL2Norm(SparseUpdate::Empty(5)), 0.0);
  SparseUpdate u = SparseUpdate::Empty(5);
  u.indices = {0, 3};
  u.values = {3.0, -4.0};
  EXPECT_DOUBLE_EQ(SparseL2Norm(u), 5.0);
  const std::vector<double> v = {1, 4, 3, -2, 6, 0};
  const SparseUpdate dq = DsgdQuantize(v, 2);  // keeps {6, 4} at value 5
  EXPECT_DOUBLE_EQ(SparseL2Norm(dq),
                   std::abs(dq.values[0]) * std::sqrt(double(dq.nnz())));
}

TEST(SparseUpdateTest, ValidateAndDense) {
  SparseUpdate u = SparseUpdate::Empty(4);
  u.indices = {1, 1};
  u.values = {1, 2};
  EXPECT_THROW(u.Validate(), std::invalid_argument);
  u.indices = {1, 4};
  EXPECT_THROW(u.Validate(), std::invalid_argument);
  u.indices = {0, 2};
  EXPECT_NO_THROW(u.Validate());
  EXPECT_EQ(u.ToDense(), (std::vector<double>{1, 0, 2, 0}));
  std::vector<double> wrong(3);
  EXPECT_THROW(u.AddTo(wrong), std::invalid_argument);
}

}  // namespace
}  // namespace fedsched
