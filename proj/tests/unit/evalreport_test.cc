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

#include "piiaudit/evalreport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "piiaudit/errors.hpp"
#include "piiaudit/rng.hpp"

namespace piiaudit::report {
namespace {

AttackOutcome Outcome(bool success, int repeat = 0, std::optional<int> step = std::nullopt,
                      std::optional<int> position = std::nullopt) {
  AttackOutcome o;
  o.attack = "gep";
  o.strategy = Strategy::kTopK;
  o.repeat = repeat;
  o.success = success;
  o.step = step;
  o.position = position;
  return o;
}

std::vector<AttackOutcome> Counted(int n, int successes, int repeat = 0) {
  std::vector<AttackOutcome> out;
  for (int i = 0; i < n; ++i) out.push_back(Outcome(i < successes, repeat, 1, 0));
  return out;
}

TEST(ComputeAsrTest, ZeroSuccesses) {
  const auto r = ComputeAsr(Counted(100, 0));
  EXPECT_EQ(r.attacked, 100);
  EXPECT_EQ(r.successes, 0);
  EXPECT_EQ(r.asr(), 0.0);
}

TEST(ComputeAsrTest, ExactRatio) {
  const auto r = ComputeAsr(Counted(10000, 643));
  EXPECT_EQ(r.asr(), 0.0643);
  EXPECT_EQ(r.repeats(), 1);
  EXPECT_EQ(r.stddev(), 0.0);
}

TEST(ComputeAsrTest, SevenRepeatMean) {
  const int successes[7] = {3, 7, 0, 10, 5, 2, 9};
  std::vector<AttackOutcome> all;
  double hand_sum = 0.0;
  for (int k = 0; k < 7; ++k) {
    auto cell = Counted(20, successes[k], k);
    all.insert(all.end(), cell.begin(), cell.end());
    hand_sum += successes[k] / 20.0;
  }
  const auto r = ComputeAsr(all);
  ASSERT_EQ(r.repeats(), 7);
  EXPECT_DOUBLE_EQ(r.mean(), hand_sum / 7.0);
  for (int k = 0; k < 7; ++k) EXPECT_EQ(r.repeat_asr()[k], successes[k] / 20.0);
  // Sample standard deviation computed by hand: mean 36/140.
  double ss = 0.0;
  for (int s : successes) ss += (s / 20.0 - hand_sum / 7.0) * (s / 20.0 - hand_sum / 7.0);
  EXPECT_DOUBLE_EQ(r.stddev(), std::sqrt(ss / 6.0));
}

TEST(ComputeAsrTest, Errors) {
  EXPECT_THROW(ComputeAsr(std::vector<AttackOutcome>{}), InvalidArgument);
  auto mixed = Counted(3, 1);
  mixed[1].strategy = Strategy::kBeam;
  EXPECT_THROW(ComputeAsr(mixed), InvalidArgument);
  mixed = Counted(3, 1);
  mixed[2].attack = "template-query";
  EXPECT_THROW(ComputeAsr(mixed), InvalidArgument);
}

TEST(ComputeAsrTest, RandomizedConservationAndMonotonicity) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.Index(60));
    const int steps = 1 + static_cast<int>(rng.Index(20));
    std::vector<AttackOutcome> outs;
    int expected = 0;
    for (int i = 0; i < n; ++i) {
      const bool success = rng.Unit() < 0.3;
      expected += success;
      outs.push_back(success ? Outcome(true, 0, 1 + static_cast<int>(rng.Index(steps)),
                                       static_cast<int>(rng.Index(200)))
                             : Outcome(false, 0, steps));
    }
    const auto r = ComputeAsr(outs);
    ASSERT_EQ(r.successes, expected);
    ASSERT_LE(r.successes, r.attacked);
    ASSERT_EQ(std::lround(r.asr() * r.attacked), r.successes);
    ASSERT_EQ(LeakagePerStep(outs, steps).total(), expected);
    ASSERT_EQ(PositionHistogramOf(outs, 1 + static_cast<int>(rng.Index(30)), 200).total, expected);

    auto plus = outs;
    plus.push_back(Outcome(true, 0, 1, 0));
    ASSERT_GE(ComputeAsr(plus).asr(), r.asr());
    auto minus = outs;
    minus.push_back(Outcome(false));
    ASSERT_LE(ComputeAsr(minus).asr(), r.asr());
  }
}

TEST(LeakagePerStepTest, SpikeThenZeros) {
  std::vector<AttackOutcome> outs = {Outcome(true, 0, 1), Outcome(true, 0, 1), Outcome(false, 0, 5)};
  const StepCurve c = LeakagePerStep(outs, 5);
  EXPECT_EQ(c.counts, (std::vector<int>{2, 0, 0, 0, 0}));
  EXPECT_EQ(c.total(), 2);
}

TEST(LeakagePerStepTest, NonCumulative) {
  std::vector<AttackOutcome> outs = {Outcome(true, 0, 2), Outcome(true, 0, 4), Outcome(true, 0, 4)};
  EXPECT_EQ(LeakagePerStep(outs, 4).counts, (std::vector<int>{0, 1, 0, 2}));
}

TEST(LeakagePerStepTest, StepBeyondBudgetThrows) {
  std::vector<AttackOutcome> outs = {Outcome(true, 0, 6)};
  EXPECT_THROW(LeakagePerStep(outs, 5), InvalidArgument);
  outs = {Outcome(true)};
  EXPECT_THROW(LeakagePerStep(outs, 5), InvalidArgument);
}

UnifiedStepRecord Record(int repeat, int step, int successes, int n_val = 10) {
  UnifiedStepRecord r;
  r.repeat = repeat;
  r.step = step;
  r.successes = successes;
  r.n_val = n_val;
  return r;
}

TEST(AsrPerStepTest, MonotoneArgmaxIsLastStep) {
  std::vector<UnifiedStepRecord> recs;
  for (int t = 1; t <= 6; ++t) recs.push_back(Record(0, t, t));
  const auto curves = AsrPerStep(recs);
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_EQ(curves[0].argmax_step, 6);
  EXPECT_EQ(curves[0].max_asr, 0.6);
  EXPECT_EQ(curves[0].final_asr, 0.6);
}

TEST(AsrPerStepTest, MaxDominatesFinalAndEarliestArgmax) {
  std::vector<UnifiedStepRecord> recs = {Record(0, 1, 2), Record(0, 2, 7), Record(0, 3, 7),
                                         Record(0, 4, 3), Record(1, 1, 1), Record(1, 2, 4)};
  const auto curves = AsrPerStep(recs);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0].argmax_step, 2);
  EXPECT_GE(curves[0].max_asr, curves[0].final_asr);
  EXPECT_EQ(curves[0].asr, (std::vector<double>{0.2, 0.7, 0.7, 0.3}));
  EXPECT_EQ(curves[1].repeat, 1);
  EXPECT_EQ(curves[1].argmax_step, 2);
}

TEST(AsrPerStepTest, GapsThrow) {
  std::vector<UnifiedStepRecord> recs = {Record(0, 1, 1), Record(0, 3, 1)};
  EXPECT_THROW(AsrPerStep(recs), InvalidArgument);
}

TEST(PositionHistogramTest, SingleSuccessAtZero) {
  std::vector<AttackOutcome> outs = {Outcome(true, 0, 1, 0), Outcome(false)};
  const auto h = PositionHistogramOf(outs, 10);
  EXPECT_EQ(h.counts, (std::vector<int>{1}));
  EXPECT_EQ(h.total, 1);
  EXPECT_EQ(h.cumulative, (std::vector<double>{1.0}));
}

TEST(PositionHistogramTest, BucketsAndCumulative) {
  std::vector<AttackOutcome> outs = {Outcome(true, 0, 1, 3), Outcome(true, 0, 1, 9),
                                     Outcome(true, 0, 1, 10), Outcome(true, 0, 1, 59)};
  const auto h = PositionHistogramOf(outs, 10, 60);
  EXPECT_EQ(h.counts, (std::vector<int>{2, 1, 0, 0, 0, 1}));
  EXPECT_EQ(h.cumulative, (std::vector<double>{0.5, 0.75, 0.75, 0.75, 0.75, 1.0}));
}

TEST(PositionHistogramTest, BoundsEnforced) {
  std::vector<AttackOutcome> outs = {Outcome(true, 0, 1, 60)};
  EXPECT_THROW(PositionHistogramOf(outs, 10, 60), InvalidArgument);
  EXPECT_THROW(PositionHistogramOf(outs, 0), InvalidArgument);
  outs = {Outcome(true, 0, 1)};
  EXPECT_THROW(PositionHistogramOf(outs, 10), InvalidArgument);
}

TEST(AxisRangeTest, ExtremaPlusMargin) {
  const std::vector<double> v = {2.0, -1.0, 5.0};
  const AxisRange r = AxisRangeOf(v, 0.1);
  EXPECT_DOUBLE_EQ(r.lo, -1.0 - 0.6);
  EXPECT_DOUBLE_EQ(r.hi, 5.0 + 0.6);
  const AxisRange exact = AxisRangeOf(v, 0.0);
  EXPECT_EQ(exact.lo, -1.0);
  EXPECT_EQ(exact.hi, 5.0);
  const std::vector<double> flat = {3.0, 3.0};
  const AxisRange f = AxisRangeOf(flat, 0.25);
  EXPECT_EQ(f.lo, 2.75);
  EXPECT_EQ(f.hi, 3.25);
}

TEST(AxisRangeTest, ChartTicksSpanRange) {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  const std::vector<double> ys = {0.0, 0.5, 1.0, 0.5, 0.0};
  const std::string svg = LineChartSvg("t", "x", "y", xs, ys, 0.0);
  // With zero margin the extreme ticks carry the data extrema.
  EXPECT_NE(svg.find(">1</text>"), std::string::npos);
  EXPECT_NE(svg.find(">5</text>"), std::string::npos);
  EXPECT_NE(svg.find(">0</text>"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

class EmitReportTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("evalreport_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  static std::vector<ReportInput> Inputs() {
    ReportInput gep;
    gep.outcomes = {Outcome(true, 0, 1, 4), Outcome(true, 0, 3, 25), Outcome(false, 0, 4),
                    Outcome(true, 1, 2, 13), Outcome(false, 1, 4), Outcome(false, 1, 4)};
    gep.step_budget = 4;
    gep.max_length = 60;
    ReportInput tq;
    tq.method = "T&G";
    for (int i = 0; i < 5; ++i) {
      AttackOutcome o = Outcome(i == 0, 0, i == 0 ? std::optional<int>(1) : std::nullopt,
                                i == 0 ? std::optional<int>(7) : std::nullopt);
      o.attack = "template-query";
      o.strategy = Strategy::kGreedy;
      tq.outcomes.push_back(o);
    }
    ReportInput uni;
    uni.outcomes = gep.outcomes;
    for (auto& o : uni.outcomes) o.attack = "gep-unified";
    uni.steps = {Record(0, 1, 1, 3), Record(0, 2, 2, 3), Record(1, 1, 0, 3), Record(1, 2, 1, 3)};
    return {tq, gep, uni};
  }

  static std::string Slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::filesystem::path dir_;
};

TEST_F(EmitReportTest, TableShape) {
  const auto inputs = Inputs();
  ReportOptions opts;
  opts.sweep = {{1, {0.1, 0.3}, 0.2}, {4, {0.5, 0.5}, 0.5}};
  const auto files = EmitReport(inputs, dir_, opts);
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(dir_ / f)) << f;
  EXPECT_EQ(Slurp(dir_ / "asr_table.csv"),
            "method,strategy,ASR,std,repeats,N,N_s\n"
            "T&G,greedy,0.2,0,1,5,1\n"
            "gep,topk,0.5,0.2357022604,2,6,3\n"
            "gep-unified,topk,0.5,0.2357022604,2,6,3\n");
  const std::string cells = Slurp(dir_ / "asr_cells.csv");
  EXPECT_EQ(cells.substr(0, cells.find('\n')), "method,strategy,repeat,N,N_s,ASR");
  EXPECT_NE(cells.find("gep,topk,1,3,1,0.3333333333\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "sweep.svg"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "gep_topk_leakage_per_step.svg"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "gep_unified_topk_validation_r1.svg"));
  const std::string summary = Slurp(dir_ / "summary.json");
  EXPECT_NE(summary.find("\"leakage_per_step\""), std::string::npos);
  EXPECT_NE(summary.find("\"first_half_fraction\""), std::string::npos);
}

TEST_F(EmitReportTest, ByteIdenticalReemission) {
  const auto inputs = Inputs();
  ReportOptions opts;
  const auto first = EmitReport(inputs, dir_ / "a", opts);
  const auto second = EmitReport(inputs, dir_ / "b", opts);
  ASSERT_EQ(first, second);
  for (const auto& f : first) EXPECT_EQ(Slurp(dir_ / "a" / f), Slurp(dir_ / "b" / f)) << f;
  // Overwriting in place yields the same bytes as well.
  EmitReport(inputs, dir_ / "a", opts);
  for (const auto& f : first) EXPECT_EQ(Slurp(dir_ / "a" / f), Slurp(dir_ / "b" / f)) << f;
}

TEST_F(EmitReportTest, FormatFlagsGateFiles) {
  const auto inputs = Inputs();
  ReportOptions opts;
  opts.svg = false;
  opts.json = false;
  const auto files = EmitReport(inputs, dir_, opts);
  EXPECT_EQ(files, (std::vector<std::string>{"asr_cells.csv", "asr_table.csv"}));
  opts.csv = false;
  opts.json = true;
  EXPECT_EQ(EmitReport(inputs, dir_ / "j", opts), std::vector<std::string>{"summary.json"});
}

TEST_F(EmitReportTest, Errors) {
  ReportOptions opts;
  EXPECT_THROW(EmitReport(std::vector<ReportInput>{}, dir_, opts), InvalidArgument);
  std::filesystem::create_directories(dir_);
  std::ofstream(dir_ / "file") << "x";
  EXPECT_THROW(EmitReport(Inputs(), dir_ / "file" / "sub", opts), IoError);
}

}  // namespace
}  // namespace piiaudit::report
