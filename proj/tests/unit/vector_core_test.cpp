// Copyright 2026-present the vexbench authors
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
#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "vexbench/embedding.hpp"
#include "vexbench/error.hpp"
#include "vexbench/kernels.hpp"

using namespace vexbench;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vexbench::Error";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(EmbeddingTest, RejectsEmptyAndNonFinite) {
  EXPECT_EQ(code_of([] { Embedding(std::vector<float>{}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { Embedding({1.0f, std::numeric_limits<float>::quiet_NaN()}); }),
            ErrorCode::kNonFinite);
  EXPECT_EQ(code_of([] { Embedding({std::numeric_limits<float>::infinity()}); }),
            ErrorCode::kNonFinite);
}

TEST(DotTest, Examples) {
  EXPECT_EQ(dot(Embedding{1, 0}, Embedding{0, 1}), 0.0);
  EXPECT_EQ(dot(Embedding{1, 2, 3}, Embedding{1, 2, 3}), 14.0);
  EXPECT_EQ(dot(Embedding{1, 2, 3}, Embedding{4, 5, 6}), 32.0);
}

TEST(DotTest, DimensionMismatch) {
  EXPECT_EQ(code_of([] { dot(Embedding{1, 2}, Embedding{1, 2, 3}); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([] { cosine(Embedding{1, 2}, Embedding{1, 2, 3}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(NormTest, Examples) {
  EXPECT_EQ(norm(Embedding{3, 4}), 5.0);
  EXPECT_EQ(norm(Embedding{0, 0, 0}), 0.0);
  EXPECT_NEAR(norm(Embedding{1, 2, 3}), 3.74165738677394138558, 1e-15);
}

TEST(CosineTest, Examples) {
  EXPECT_EQ(cosine(Embedding{1, 0}, Embedding{1, 0}), 1.0);
  EXPECT_EQ(cosine(Embedding{1, 0}, Embedding{0, 1}), 0.0);
  EXPECT_NEAR(cosine(Embedding{1, 2, 3}, Embedding{4, 5, 6}), 0.974631846197076271, 1e-15);
}

TEST(CosineTest, ZeroNormIsRejected) {
  EXPECT_EQ(code_of([] { cosine(Embedding{0, 0}, Embedding{1, 0}); }), ErrorCode::kZeroNorm);
  EXPECT_EQ(code_of([] { cosine(Embedding{1, 0}, Embedding{0, 0}); }), ErrorCode::kZeroNorm);
}

TEST(CosineTest, Properties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<float> scale(0.001f, 1000.0f);
  std::uniform_int_distribution<std::size_t> dims(1, 300);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = dims(rng);
    const Embedding a(testing_util::random_values(rng, d));
    const Embedding b(testing_util::random_values(rng, d));
    const double ab = cosine(a, b);
    EXPECT_EQ(ab, cosine(b, a));
    EXPECT_GE(ab, -1.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(cosine(a, a), 1.0, 1e-6);

    const float s = scale(rng);
    std::vector<float> scaled(a.values().begin(), a.values().end());
    for (auto& x : scaled) x *= s;
    EXPECT_NEAR(cosine(Embedding(scaled), b), ab, 1e-6);
  }
}

TEST(CosineTest, ClampsRoundingOvershoot) {
  // Parallel vectors whose float rounding could push the ratio above 1.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Embedding a(testing_util::random_values(rng, 768));
    EXPECT_LE(cosine(a, a), 1.0);
    std::vector<float> neg(a.values().begin(), a.values().end());
    for (auto& x : neg) x = -x;
    EXPECT_GE(cosine(a, Embedding(neg)), -1.0);
  }
}

TEST(DotTest, AccumulatesInDoublePrecision) {
  // 10,000 copies of 1e-3. Summed in float this drifts by about 1e-4
  // relative; in double it matches the exact sum of the stored inputs.
  const std::vector<float> v(10000, 1e-3f);
  const double x = static_cast<double>(1e-3f);
  const double exact = 10000.0 * x * x;
  const Embedding a(v);
  EXPECT_NEAR(dot(a, a), exact, exact * 1e-9);
  // Against the decimal value 1e-2 only the float32 input rounding remains.
  EXPECT_NEAR(dot(a, a), 1e-2, 1e-2 * 1e-7);

  float naive = 0.0f;
  for (float f : v) naive += f * f;
  EXPECT_GT(std::abs(naive - exact) / exact, 1e-6);
}

TEST(KernelTest, ScalarIsAlwaysAvailable) {
  const auto all = kernels::available();
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front()->name, "scalar");
  EXPECT_EQ(kernels::find("scalar"), &kernels::scalar());
  EXPECT_EQ(kernels::find("no-such-kernel"), nullptr);
}

TEST(KernelTest, SimdVariantsMatchScalarBitForBit) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> dims(1, 1100);
  for (const kernels::KernelSet* ks : kernels::available()) {
    SCOPED_TRACE(std::string(ks->name));
    for (int trial = 0; trial < 400; ++trial) {
      // Cover every tail length plus random sizes.
      const std::size_t d = trial < 40 ? static_cast<std::size_t>(trial + 1) : dims(rng);
      const auto a = testing_util::random_values(rng, d);
      const auto b = testing_util::random_values(rng, d);
      const double want = kernels::scalar().dot(a.data(), b.data(), d);
      const double got = ks->dot(a.data(), b.data(), d);
      ASSERT_EQ(std::bit_cast<std::uint64_t>(want), std::bit_cast<std::uint64_t>(got)) << "d=" << d;
    }
  }
}

TEST(KernelTest, UnalignedInputs) {
  std::mt19937_64 rng(8);
  const auto buf_a = testing_util::random_values(rng, 800);
  const auto buf_b = testing_util::random_values(rng, 800);
  for (const kernels::KernelSet* ks : kernels::available()) {
    for (std::size_t off = 0; off < 8; ++off) {
      const double want = kernels::scalar().dot(buf_a.data() + off, buf_b.data() + 7 - off, 768);
      EXPECT_EQ(ks->dot(buf_a.data() + off, buf_b.data() + 7 - off, 768), want);
    }
  }
}

TEST(KernelTest, MatchesLongDoubleReference) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Embedding a(testing_util::random_values(rng, 768));
    const Embedding b(testing_util::random_values(rng, 768));
    for (const kernels::KernelSet* ks : kernels::available()) {
      EXPECT_NEAR(cosine(a.values(), b.values(), *ks),
                  static_cast<double>(testing_util::reference_cosine(a.values(), b.values())),
                  1e-12);
    }
  }
}

TEST(KernelTest, FoldOrderIsFixed) {
  double lanes[kernels::kLanes];
  for (std::size_t i = 0; i < kernels::kLanes; ++i) lanes[i] = static_cast<double>(i + 1);
  EXPECT_EQ(kernels::fold_lanes(lanes), 136.0);
}

TEST(CounterTest, CountsEveryEvaluation) {
  const Embedding a{1, 2, 3};
  const Embedding b{4, 5, 6};
  const auto before = cosine_evaluations();
  cosine(a, b);
  cosine(b, a);
  EXPECT_EQ(cosine_evaluations() - before, 2u);
  // Plain dot and norm are not similarity evaluations.
  dot(a, b);
  norm(a);
  EXPECT_EQ(cosine_evaluations() - before, 2u);
}
