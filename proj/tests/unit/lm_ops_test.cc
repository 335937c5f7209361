// Copyright 2026 The PII Audit Authors
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

#include "piiaudit/lm.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "../oracle/naive_lm.hpp"
#include "piiaudit/errors.hpp"
#include "test_support.hpp"

namespace piiaudit {
namespace {

using testing::RandomModel;
using testing::TinyConfig;

// A model whose logits ignore the input: output head zeroed.
Model ConstantHeadModel(int vocab, float bias_value) {
  Model m = RandomModel(TinyConfig(vocab), 4);
  MatView w = m.MutableTensor("head.weight");
  std::fill_n(w.data, static_cast<std::size_t>(w.rows) * w.cols, 0.0f);
  MatView b = m.MutableTensor("head.bias");
  std::fill_n(b.data, b.cols, bias_value);
  return m;
}

TEST(NllSpanTest, UniformModelGivesLogV) {
  Model m = ConstantHeadModel(37, 0.0f);
  std::vector<TokenId> ctx{1, 5, 6, 7, 8};
  EXPECT_NEAR(NllSpan(m, ctx, {4, 5}), std::log(37.0), 1e-6);
  EXPECT_NEAR(NllSpan(m, ctx, {1, 5}), std::log(37.0), 1e-6);
}

TEST(NllSpanTest, MatchesLogSoftmaxOfForwardLogits) {
  Model m = RandomModel(TinyConfig(20), 8);
  std::vector<TokenId> ctx{1, 3, 5, 7, 9, 11, 13, 15};
  Matrix logits = m.Forward(ctx);
  double want = 0;
  for (int t = 5; t < 8; ++t) {
    oracle::Vec row(logits.row(t - 1), logits.row(t - 1) + 20);
    want -= oracle::LogSoftmaxAt(row, ctx[t]);
  }
  want /= 3;
  const double got = NllSpan(m, ctx, {5, 8});
  EXPECT_NEAR(got, want, 1e-6);
  EXPECT_GE(got, 0.0);
}

TEST(NllSpanTest, RejectsEmptyOrMisplacedSpan) {
  Model m = RandomModel(TinyConfig(20), 8);
  std::vector<TokenId> ctx{1, 3, 5};
  EXPECT_THROW(NllSpan(m, ctx, {2, 2}), InvalidArgument);
  EXPECT_THROW(NllSpan(m, ctx, {0, 1}), InvalidArgument);
  EXPECT_THROW(NllSpan(m, ctx, {2, 4}), InvalidArgument);
}

TEST(GradOneHotTest, ShapeIsTriggerLengthByVocab) {
  Model m = RandomModel(TinyConfig(20), 8);
  std::vector<TokenId> prompt{1, 3, 5, 7, 9, 11};
  std::vector<int> trig{2, 3};
  GradientSlice g = GradOneHot(m, prompt, trig, {4, 6});
  EXPECT_EQ(g.grad.rows(), 2);
  EXPECT_EQ(g.grad.cols(), 20);
  for (float x : g.grad.values()) EXPECT_TRUE(std::isfinite(x));
  EXPECT_NEAR(g.loss, NllSpan(m, prompt, {4, 6}), 1e-9);
}

TEST(GradOneHotTest, OverlappingTriggerAndTargetIsAnError) {
  Model m = RandomModel(TinyConfig(20), 8);
  std::vector<TokenId> prompt{1, 3, 5, 7, 9, 11};
  std::vector<int> trig{4};
  EXPECT_THROW(GradOneHot(m, prompt, trig, {4, 6}), InvalidArgument);
  std::vector<int> bad{9};
  EXPECT_THROW(GradOneHot(m, prompt, bad, {4, 6}), InvalidArgument);
}

TEST(GradOneHotTest, ConstantFunctionHasZeroGradient) {
  Model m = ConstantHeadModel(15, 0.5f);
  std::vector<TokenId> prompt{1, 3, 5, 7, 9};
  std::vector<int> trig{1, 2};
  GradientSlice g = GradOneHot(m, prompt, trig, {3, 5});
  for (float x : g.grad.values()) EXPECT_EQ(x, 0.0f);
}

// Central differences along e_v at a trigger position, evaluated with the
// double-precision oracle.
TEST(GradOneHotTest, MatchesCentralFiniteDifferences) {
  const int vocab = 48;
  Model m = RandomModel(TinyConfig(vocab, 2, 32, 4, 32), 17, 0.2f);
  std::vector<TokenId> prompt{1, 12, 30, 7, 41, 5, 19, 22, 8};
  std::vector<int> trig{3, 4, 5};
  const TokenSpan target{6, 9};
  GradientSlice g = GradOneHot(m, prompt, trig, target);

  const auto base = oracle::Embed(m, prompt);
  const auto wte = oracle::Load(m, "wte");
  const double eps = 1e-3;
  Rng rng(2024);
  double worst = 0;
  for (int s = 0; s < 64; ++s) {
    const int row = static_cast<int>(rng.Index(trig.size()));
    const int v = static_cast<int>(rng.Index(vocab));
    auto plus = base, minus = base;
    for (int i = 0; i < 32; ++i) {
      plus[trig[row]][i] += eps * wte[v][i];
      minus[trig[row]][i] -= eps * wte[v][i];
    }
    const double fd = (oracle::SpanLoss(m, prompt, plus, target.begin, target.end) -
                       oracle::SpanLoss(m, prompt, minus, target.begin, target.end)) /
                      (2 * eps);
    const double an = g.grad(row, v);
    const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6});
    worst = std::max(worst, rel);
    EXPECT_LE(rel, 1e-3) << "row " << row << " v " << v << " fd " << fd << " an " << an;
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

}  // namespace
}  // namespace piiaudit
