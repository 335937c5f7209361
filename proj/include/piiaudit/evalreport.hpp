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

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "piiaudit/attack.hpp"

namespace piiaudit::report {

using attack::AttackOutcome;
using attack::UnifiedStepRecord;

// Success counts of one (method, strategy) cell. ASR values are the exact
// ratios of the integer counts.
struct AsrReport {
  std::string method;
  Strategy strategy = Strategy::kGreedy;
  int attacked = 0;   // N, pooled over repeats
  int successes = 0;  // N_s, pooled over repeats
  std::vector<int> repeat_ids;
  std::vector<int> repeat_attacked;
  std::vector<int> repeat_successes;

  int repeats() const { return static_cast<int>(repeat_ids.size()); }
  double asr() const { return static_cast<double>(successes) / attacked; }
  std::vector<double> repeat_asr() const;
  double mean() const;
  // Sample standard deviation of the per-repeat ASRs; 0 for one repeat.
  double stddev() const;
};

// Throws InvalidArgument on an empty set or when outcomes mix attacks or
// strategies.
AsrReport ComputeAsr(std::span<const AttackOutcome> outcomes, const std::string& method = "");

// counts[t - 1] = number of first successes at step t (not cumulative).
struct StepCurve {
  std::vector<int> counts;
  int total() const;
};

// Throws InvalidArgument when an outcome succeeded after step `steps`.
StepCurve LeakagePerStep(std::span<const AttackOutcome> outcomes, int steps);

// Validation ASR after every step of one unified run.
struct StepAsrCurve {
  int repeat = 0;
  std::vector<int> steps;
  std::vector<double> asr;
  int argmax_step = 0;  // earliest step reaching the maximum
  double max_asr = 0.0;
  double final_asr = 0.0;
};

// One curve per repeat, in repeat order. Throws InvalidArgument when a
// repeat's steps are not 1, 2, ... in order.
std::vector<StepAsrCurve> AsrPerStep(std::span<const UnifiedStepRecord> records);

struct PositionHistogram {
  int bucket_width = 10;
  std::vector<int> counts;         // bucket b covers [b*w, (b+1)*w)
  std::vector<double> cumulative;  // fraction of successes in buckets <= b
  int total = 0;
};

// Positions of successful outcomes. `max_length` (when positive) fixes the
// number of buckets and bounds the positions; violations throw
// InvalidArgument.
PositionHistogram PositionHistogramOf(std::span<const AttackOutcome> outcomes, int bucket_width = 10,
                                      int max_length = 0);

struct SweepPoint {
  int trigger_length = 0;
  std::vector<double> repeat_asr;
  double mean = 0.0;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

// [min - margin * span, max + margin * span]; a zero span widens by margin on
// each side.
AxisRange AxisRangeOf(std::span<const double> values, double margin);

// Minimal deterministic SVG charts.
std::string LineChartSvg(const std::string& title, const std::string& x_label,
                         const std::string& y_label, std::span<const double> xs,
                         std::span<const double> ys, double margin = 0.05);
std::string BarChartSvg(const std::string& title, const std::string& x_label,
                        const std::string& y_label, std::span<const std::string> categories,
                        std::span<const double> values, double margin = 0.05);

// One attack result file set to report on.
struct ReportInput {
  std::string method;  // defaults to the attack name
  std::vector<AttackOutcome> outcomes;
  std::vector<UnifiedStepRecord> steps;
  int step_budget = 0;  // T, for the leakage-per-step curve
  int max_length = 0;   // generation length bound, 0 when unknown
};

struct ReportOptions {
  bool csv = true;
  bool json = true;
  bool svg = true;
  int bucket_width = 10;
  double chart_margin = 0.05;
  std::vector<SweepPoint> sweep;
};

// Writes asr_cells.csv (method, strategy, repeat, N, N_s, ASR),
// asr_table.csv (method, strategy, ASR, std, repeats), summary.json and the
// charts. Returns the written file names in order. Throws InvalidArgument on
// no inputs and IoError when the directory is unwritable.
std::vector<std::string> EmitReport(std::span<const ReportInput> inputs,
                                    const std::filesystem::path& out_dir,
                                    const ReportOptions& options);

}  // namespace piiaudit::report
