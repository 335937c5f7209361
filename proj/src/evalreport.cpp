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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "piiaudit/errors.hpp"

namespace piiaudit::report {
namespace {

using ojson = nlohmann::ordered_json;

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

struct Frame {
  AxisRange x, y;
  double Px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
  double Py(double v) const {
    return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom);
  }
};

std::string SvgHeader(const std::string& title, const std::string& x_label,
                      const std::string& y_label) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                  "viewBox=\"0 0 640 400\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + XmlEscape(title) +
       "</text>\n";
  s += "<text x=\"" + Format("%.2f", kLeft + (kWidth - kLeft - kRight) / 2) +
       "\" y=\"392\" text-anchor=\"middle\">" + XmlEscape(x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + Format("%.2f", kTop + (kHeight - kTop - kBottom) / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       Format("%.2f", kTop + (kHeight - kTop - kBottom) / 2) + ")\">" + XmlEscape(y_label) +
       "</text>\n";
  return s;
}

std::string YAxis(const Frame& f) {
  std::string s;
  const double x0 = kLeft, y0 = kHeight - kBottom;
  s += "<line x1=\"" + Format("%.2f", x0) + "\" y1=\"" + Format("%.2f", kTop) + "\" x2=\"" +
       Format("%.2f", x0) + "\" y2=\"" + Format("%.2f", y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + Format("%.2f", x0) + "\" y1=\"" + Format("%.2f", y0) + "\" x2=\"" +
       Format("%.2f", kWidth - kRight) + "\" y2=\"" + Format("%.2f", y0) +
       "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = f.y.lo + (f.y.hi - f.y.lo) * i / 4.0;
    const std::string py = Format("%.2f", f.Py(v));
    s += "<line x1=\"" + Format("%.2f", x0 - 4) + "\" y1=\"" + py + "\" x2=\"" +
         Format("%.2f", x0) + "\" y2=\"" + py + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + Format("%.2f", x0 - 6) + "\" y=\"" + py +
         "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + Format("%.3g", v) + "</text>\n";
  }
  return s;
}

}  // namespace

std::vector<double> AsrReport::repeat_asr() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < repeat_ids.size(); ++i) {
    out.push_back(static_cast<double>(repeat_successes[i]) / repeat_attacked[i]);
  }
  return out;
}

double AsrReport::mean() const {
  const std::vector<double> v = repeat_asr();
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double AsrReport::stddev() const {
  const std::vector<double> v = repeat_asr();
  if (v.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

AsrReport ComputeAsr(std::span<const AttackOutcome> outcomes, const std::string& method) {
  if (outcomes.empty()) throw InvalidArgument("no outcomes to compute an ASR from");
  AsrReport r;
  r.method = method.empty() ? outcomes[0].attack : method;
  r.strategy = outcomes[0].strategy;
  std::map<int, std::pair<int, int>> per_repeat;
  for (const auto& o : outcomes) {
    if (o.attack != outcomes[0].attack || o.strategy != r.strategy) {
      throw InvalidArgument("outcomes mix attacks or strategies");
    }
    auto& [n, s] = per_repeat[o.repeat];
    ++n;
    s += o.success ? 1 : 0;
  }
  for (const auto& [repeat, counts] : per_repeat) {
    r.repeat_ids.push_back(repeat);
    r.repeat_attacked.push_back(counts.first);
    r.repeat_successes.push_back(counts.second);
    r.attacked += counts.first;
    r.successes += counts.second;
  }
  return r;
}

int StepCurve::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

StepCurve LeakagePerStep(std::span<const AttackOutcome> outcomes, int steps) {
  if (steps < 1) throw InvalidArgument("step budget must be positive");
  StepCurve curve;
  curve.counts.assign(steps, 0);
  for (const auto& o : outcomes) {
    if (!o.success) continue;
    if (!o.step || *o.step < 1 || *o.step > steps) {
      throw InvalidArgument("success step outside 1.." + std::to_string(steps));
    }
    ++curve.counts[*o.step - 1];
  }
  return curve;
}

std::vector<StepAsrCurve> AsrPerStep(std::span<const UnifiedStepRecord> records) {
  std::map<int, StepAsrCurve> by_repeat;
  for (const auto& r : records) {
    StepAsrCurve& c = by_repeat[r.repeat];
    c.repeat = r.repeat;
    if (r.step != static_cast<int>(c.steps.size()) + 1) {
      throw InvalidArgument("step records of repeat " + std::to_string(r.repeat) +
                            " are not consecutive");
    }
    c.steps.push_back(r.step);
    c.asr.push_back(r.asr());
  }
  std::vector<StepAsrCurve> out;
  for (auto& [repeat, c] : by_repeat) {
    const auto best = std::max_element(c.asr.begin(), c.asr.end());
    c.max_asr = *best;
    c.argmax_step = c.steps[best - c.asr.begin()];
    c.final_asr = c.asr.back();
    out.push_back(std::move(c));
  }
  return out;
}

PositionHistogram PositionHistogramOf(std::span<const AttackOutcome> outcomes, int bucket_width,
                                      int max_length) {
  if (bucket_width < 1) throw InvalidArgument("bucket width must be positive");
  std::vector<int> positions;
  for (const auto& o : outcomes) {
    if (!o.success) continue;
    if (!o.position || *o.position < 0) throw InvalidArgument("success without a position");
    if (max_length > 0 && *o.position >= max_length) {
      throw InvalidArgument("leakage position beyond the generation length");
    }
    positions.push_back(*o.position);
  }
  int limit = max_length;
  for (int p : positions) limit = std::max(limit, p + 1);
  PositionHistogram h;
  h.bucket_width = bucket_width;
  h.counts.assign(std::max(1, (limit + bucket_width - 1) / bucket_width), 0);
  for (int p : positions) ++h.counts[p / bucket_width];
  h.total = static_cast<int>(positions.size());
  int running = 0;
  for (int c : h.counts) {
    running += c;
    h.cumulative.push_back(h.total == 0 ? 0.0 : static_cast<double>(running) / h.total);
  }
  return h;
}

AxisRange AxisRangeOf(std::span<const double> values, double margin) {
  if (values.empty()) return {0.0, 1.0};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  if (span == 0.0) {
    const double pad = margin > 0.0 ? margin : 0.5;
    return {*lo - pad, *hi + pad};
  }
  return {*lo - margin * span, *hi + margin * span};
}

std::string LineChartSvg(const std::string& title, const std::string& x_label,
                         const std::string& y_label, std::span<const double> xs,
                         std::span<const double> ys, double margin) {
  if (xs.size() != ys.size()) throw InvalidArgument("x and y lengths differ");
  const Frame f{AxisRangeOf(xs, margin), AxisRangeOf(ys, margin)};
  std::string s = SvgHeader(title, x_label, y_label) + YAxis(f);
  for (int i = 0; i <= 4; ++i) {
    const double v = f.x.lo + (f.x.hi - f.x.lo) * i / 4.0;
    s += "<text x=\"" + Format("%.2f", f.Px(v)) + "\" y=\"" + Format("%.2f", kHeight - kBottom + 16) +
         "\" text-anchor=\"middle\">" + Format("%.3g", v) + "</text>\n";
  }
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += Format("%.2f", f.Px(xs[i])) + "," + Format("%.2f", f.Py(ys[i]));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

std::string BarChartSvg(const std::string& title, const std::string& x_label,
                        const std::string& y_label, std::span<const std::string> categories,
                        std::span<const double> values, double margin) {
  if (categories.size() != values.size()) throw InvalidArgument("category and value counts differ");
  std::vector<double> with_zero(values.begin(), values.end());
  with_zero.push_back(0.0);
  const AxisRange y = AxisRangeOf(with_zero, margin);
  const double n = std::max<double>(1.0, categories.size());
  const Frame f{{0.0, n}, y};
  std::string s = SvgHeader(title, x_label, y_label) + YAxis(f);
  const double slot = (kWidth - kLeft - kRight) / n;
  const int label_every = std::max(1, static_cast<int>(categories.size()) / 12);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double top = f.Py(std::max(values[i], 0.0));
    const double base = f.Py(std::min(values[i], 0.0));
    s += "<rect x=\"" + Format("%.2f", f.Px(i) + slot * 0.1) + "\" y=\"" + Format("%.2f", top) +
         "\" width=\"" + Format("%.2f", slot * 0.8) + "\" height=\"" + Format("%.2f", base - top) +
         "\" fill=\"#1f77b4\"/>\n";
    if (i % label_every == 0) {
      s += "<text x=\"" + Format("%.2f", f.Px(i + 0.5)) + "\" y=\"" +
           Format("%.2f", kHeight - kBottom + 16) + "\" text-anchor=\"middle\">" +
           XmlEscape(categories[i]) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

std::vector<std::string> EmitReport(std::span<const ReportInput> inputs,
                                    const std::filesystem::path& out_dir,
                                    const ReportOptions& options) {
  if (inputs.empty()) throw InvalidArgument("no report inputs");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& bytes) {
    WriteFile(out_dir / name, bytes);
    written.push_back(name);
  };

  std::vector<AsrReport> reports;
  for (const auto& in : inputs) reports.push_back(ComputeAsr(in.outcomes, in.method));

  if (options.csv) {
    std::string cells = "method,strategy,repeat,N,N_s,ASR\n";
    std::string table = "method,strategy,ASR,std,repeats,N,N_s\n";
    for (const auto& r : reports) {
      const std::string head = CsvField(r.method) + "," + std::string(StrategyName(r.strategy));
      const auto asr = r.repeat_asr();
      for (int i = 0; i < r.repeats(); ++i) {
        cells += head + "," + std::to_string(r.repeat_ids[i]) + "," +
                 std::to_string(r.repeat_attacked[i]) + "," +
                 std::to_string(r.repeat_successes[i]) + "," + Format("%.10g", asr[i]) + "\n";
      }
      table += head + "," + Format("%.10g", r.mean()) + "," + Format("%.10g", r.stddev()) + "," +
               std::to_string(r.repeats()) + "," + std::to_string(r.attacked) + "," +
               std::to_string(r.successes) + "\n";
    }
    emit("asr_cells.csv", cells);
    emit("asr_table.csv", table);
    if (!options.sweep.empty()) {
      std::string sweep = "trigger_length,mean_ASR,repeat_ASRs\n";
      for (const auto& p : options.sweep) {
        std::string reps;
        for (double a : p.repeat_asr) reps += (reps.empty() ? "" : ";") + Format("%.10g", a);
        sweep += std::to_string(p.trigger_length) + "," + Format("%.10g", p.mean) + "," + reps + "\n";
      }
      emit("sweep.csv", sweep);
    }
  }

  ojson summary;
  summary["cells"] = ojson::array();
  std::set<std::string> used_slugs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ReportInput& in = inputs[i];
    const AsrReport& r = reports[i];
    std::string slug = Slug(r.method + "_" + std::string(StrategyName(r.strategy)));
    for (int k = 2; !used_slugs.insert(slug).second; ++k) slug += "_" + std::to_string(k);

    ojson cell;
    cell["method"] = r.method;
    cell["attack"] = in.outcomes.front().attack;
    cell["strategy"] = StrategyName(r.strategy);
    cell["N"] = r.attacked;
    cell["N_s"] = r.successes;
    cell["asr"] = r.asr();
    cell["mean"] = r.mean();
    cell["std"] = r.stddev();
    cell["repeats"] = ojson::array();
    const auto asr = r.repeat_asr();
    for (int k = 0; k < r.repeats(); ++k) {
      cell["repeats"].push_back({{"repeat", r.repeat_ids[k]},
                                 {"N", r.repeat_attacked[k]},
                                 {"N_s", r.repeat_successes[k]},
                                 {"asr", asr[k]}});
    }

    const PositionHistogram hist = PositionHistogramOf(in.outcomes, options.bucket_width, in.max_length);
    std::vector<double> fractions;
    for (int c : hist.counts) {
      fractions.push_back(hist.total == 0 ? 0.0 : static_cast<double>(c) / hist.total);
    }
    cell["position_histogram"] = {{"bucket_width", hist.bucket_width},
                                  {"total", hist.total},
                                  {"counts", hist.counts},
                                  {"fractions", fractions},
                                  {"cumulative", hist.cumulative}};
    if (options.svg && hist.total > 0) {
      std::vector<std::string> labels;
      std::vector<double> values;
      for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        labels.push_back(std::to_string(b * hist.bucket_width));
        values.push_back(hist.counts[b]);
      }
      emit(slug + "_positions.svg",
           BarChartSvg(r.method + " (" + std::string(StrategyName(r.strategy)) + ")",
                       "leakage position (token)", "successes", labels, values,
                       options.chart_margin));
    }

    if (in.step_budget > 0 && in.steps.empty()) {
      const StepCurve curve = LeakagePerStep(in.outcomes, in.step_budget);
      int first_half = 0;
      for (int t = 0; t < in.step_budget / 2; ++t) first_half += curve.counts[t];
      cell["leakage_per_step"] = curve.counts;
      cell["first_half_fraction"] =
          curve.total() == 0 ? 0.0 : static_cast<double>(first_half) / curve.total();
      if (options.svg && curve.total() > 0) {
        std::vector<double> xs, ys;
        for (int t = 0; t < in.step_budget; ++t) {
          xs.push_back(t + 1);
          ys.push_back(curve.counts[t]);
        }
        emit(slug + "_leakage_per_step.svg",
             LineChartSvg(r.method + " (" + std::string(StrategyName(r.strategy)) + ")", "step",
                          "new successes", xs, ys, options.chart_margin));
      }
    }

    if (!in.steps.empty()) {
      cell["validation"] = ojson::array();
      for (const StepAsrCurve& c : AsrPerStep(in.steps)) {
        cell["validation"].push_back({{"repeat", c.repeat},
                                      {"argmax_step", c.argmax_step},
                                      {"max_asr", c.max_asr},
                                      {"final_asr", c.final_asr},
                                      {"asr", c.asr}});
        if (options.svg) {
          std::vector<double> xs(c.steps.begin(), c.steps.end());
          emit(slug + "_validation_r" + std::to_string(c.repeat) + ".svg",
               LineChartSvg(r.method + " (" + std::string(StrategyName(r.strategy)) + ")", "step",
                            "validation ASR", xs, c.asr, options.chart_margin));
        }
      }
    }
    summary["cells"].push_back(std::move(cell));
  }

  if (!options.sweep.empty()) {
    summary["sweep"] = ojson::array();
    std::vector<double> xs, ys;
    for (const auto& p : options.sweep) {
      summary["sweep"].push_back(
          {{"trigger_length", p.trigger_length}, {"mean", p.mean}, {"repeat_asr", p.repeat_asr}});
      xs.push_back(p.trigger_length);
      ys.push_back(p.mean);
    }
    if (options.svg) {
      emit("sweep.svg", LineChartSvg("Trigger length sweep", "trigger length", "mean ASR", xs, ys,
                                     options.chart_margin));
    }
  }
  if (options.json) emit("summary.json", summary.dump(2) + "\n");
  return written;
}

}  // namespace piiaudit::report
