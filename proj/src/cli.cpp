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

#include "piiaudit/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "piiaudit/attack.hpp"
#include "piiaudit/checkpoint.hpp"
#include "piiaudit/corpus.hpp"
#include "piiaudit/errors.hpp"
#include "piiaudit/evalreport.hpp"
#include "piiaudit/log.hpp"
#include "piiaudit/rng.hpp"
#include "piiaudit/trainer.hpp"

namespace piiaudit::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char* kOutcomesFile = "outcomes.jsonl";
constexpr const char* kStepsFile = "steps.jsonl";
constexpr const char* kCheckpointFile = "model.ckpt";
constexpr const char* kLossFile = "loss.jsonl";
constexpr const char* kProbeFile = "probe.json";
constexpr const char* kBaseFile = "base.jsonl";

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string UtcNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

// Resolved values of every long option of a (sub)command.
ojson OptionSnapshot(const CLI::App& app) {
  ojson cfg = ojson::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    cfg[name] = value;
  }
  return cfg;
}

struct Invocation {
  std::string command;
  std::vector<std::string> argv;
  ojson config;
  Clock::time_point start = Clock::now();
  std::string started_utc = UtcNow();
};

struct ManifestData {
  ojson seeds = ojson::object();
  std::vector<fs::path> inputs;
  std::vector<std::string> outputs;
  ojson extra = ojson::object();
};

void WriteManifest(const fs::path& dir, const Invocation& inv, const ManifestData& data) {
  ojson m;
  m["tool"] = "pii_audit";
  m["version"] = kVersion;
  m["command"] = inv.command;
  m["argv"] = inv.argv;
  m["config"] = inv.config;
  m["seeds"] = data.seeds;
  m["inputs"] = ojson::object();
  for (const auto& p : data.inputs) m["inputs"][p.string()] = FileFingerprint(p);
  m["outputs"] = data.outputs;
  for (const auto& [k, v] : data.extra.items()) m[k] = v;
  m["timings"] = {{"started_utc", inv.started_utc},
                  {"wall_seconds",
                   std::chrono::duration<double>(Clock::now() - inv.start).count()}};
  WriteText(dir / kManifestFile, m.dump(2) + "\n");
}

fs::path ResolveOut(const std::string& flag, const std::string& slug) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv(kOutEnv);
  if (env != nullptr && *env != '\0') return fs::path(env) / slug;
  throw UsageError(std::string("--out is required when ") + kOutEnv + " is unset");
}

// Creates the output directory, refusing to write into an input directory.
void PrepareOut(const fs::path& out, std::initializer_list<fs::path> inputs) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
  for (const fs::path& in : inputs) {
    const fs::path dir = fs::is_directory(in) ? in : in.parent_path();
    if (!dir.empty() && fs::exists(dir) && fs::equivalent(dir, out, ec)) {
      throw UsageError("output directory " + out.string() + " would overwrite inputs");
    }
  }
}

std::vector<std::vector<TokenId>> FrameSequences(const Vocab& vocab,
                                                 std::span<const corpus::DialogueEntry> entries) {
  std::vector<std::vector<TokenId>> seqs;
  seqs.reserve(entries.size());
  for (const auto& e : entries) {
    std::vector<TokenId> ids = {Vocab::kBos};
    const auto body = vocab.Encode(corpus::EntryText(e));
    ids.insert(ids.end(), body.begin(), body.end());
    ids.push_back(Vocab::kEos);
    seqs.push_back(std::move(ids));
  }
  return seqs;
}

std::string FormatRate(int hits, int total) {
  std::ostringstream ss;
  ss << hits << "/" << total << " = " << std::setprecision(4)
     << (total == 0 ? 0.0 : static_cast<double>(hits) / total);
  return ss.str();
}

// ---- gen-corpus -------------------------------------------------------------

struct GenCorpusFlags {
  int entries = 2000;
  int canaries = 100;
  std::string mode = "template";
  std::uint64_t seed = 0;
  std::string out;
};

void CmdGenCorpus(const GenCorpusFlags& f, const Invocation& inv, std::ostream& out) {
  if (f.entries < 1) throw UsageError("--entries must be positive");
  if (f.canaries < 0 || f.canaries > f.entries) {
    throw UsageError("--canaries must lie in [0, --entries]");
  }
  const corpus::InsertionMode mode = corpus::ParseMode(f.mode);
  const fs::path dir = ResolveOut(f.out, "corpus");
  PrepareOut(dir, {});

  const auto base = corpus::GenerateBaseCorpus(f.entries, corpus::DefaultSymptoms(), {}, f.seed);
  const auto names = corpus::SampleNames(f.canaries, corpus::DefaultFirstNames(),
                                         corpus::DefaultLastNames(), f.seed);
  auto pairs = corpus::BuildPiiPairs(base, names, f.canaries, f.seed);
  const corpus::PiiDataset ds = corpus::BuildPiiDataset(base, std::move(pairs), mode, f.seed);
  corpus::WriteDataset(ds, dir);
  WriteText(dir / kBaseFile, corpus::SerializeEntries(base));

  ManifestData m;
  m.seeds["seed"] = f.seed;
  m.outputs = {std::string(corpus::kDatasetFile), std::string(corpus::kRegistryFile), kBaseFile};
  m.extra["dataset"] = {{"mode", corpus::ModeName(mode)},
                        {"entries", ds.entries.size()},
                        {"canaries", ds.registry.size()},
                        {"base_fingerprint", ds.base_fingerprint},
                        {"fingerprint", corpus::Fingerprint(ds.entries)}};
  WriteManifest(dir, inv, m);
  out << "wrote " << ds.entries.size() << " entries with " << ds.registry.size() << " "
      << corpus::ModeName(mode) << " canaries to " << dir.string() << "\n";
}

// ---- train ------------------------------------------------------------------

struct TrainFlags {
  std::string data;
  std::string out;
  TrainConfig train;
  ModelConfig model;
  int min_freq = 1;
};

void CmdTrain(const TrainFlags& f, const Invocation& inv, std::ostream& out) {
  const fs::path data(f.data);
  if (!fs::exists(data / corpus::kDatasetFile)) {
    throw IoError("no dataset at " + (data / corpus::kDatasetFile).string());
  }
  const corpus::PiiDataset ds = corpus::ReadDataset(data);
  const fs::path dir = ResolveOut(f.out, "train");
  PrepareOut(dir, {data});

  // The vocabulary also covers the attack queries so that every canary can be
  // addressed even when the corpus never spells the query words out.
  std::vector<std::string> texts;
  for (const auto& e : ds.entries) texts.push_back(corpus::EntryText(e));
  texts.emplace_back(attack::kAnchor);
  texts.emplace_back("!");
  for (const auto& p : ds.registry) texts.push_back(attack::QueryText(p.name));
  const Vocab vocab = Vocab::Build(texts, f.min_freq);
  const auto seqs = FrameSequences(vocab, ds.entries);

  ModelConfig mc = f.model;
  mc.vocab_size = vocab.size();
  out << "vocabulary " << vocab.size() << " tokens, " << seqs.size() << " sequences\n";

  std::string loss_log;
  const auto t0 = Clock::now();
  const Checkpoint ckpt =
      Train(vocab, seqs, mc, f.train, corpus::Fingerprint(ds.entries), [&](const EpochReport& r) {
        out << "epoch " << r.epoch << "/" << f.train.total_epochs() << " loss " << std::fixed
            << std::setprecision(4) << r.mean_loss << std::defaultfloat << " ("
            << std::setprecision(1) << std::fixed
            << std::chrono::duration<double>(Clock::now() - t0).count() << " s)"
            << std::defaultfloat << std::setprecision(6) << "\n"
            << std::flush;
      });
  {
    ojson line = {{"epoch", 0}, {"loss", ckpt.metadata.initial_loss}};
    loss_log += line.dump() + "\n";
    for (std::size_t i = 0; i < ckpt.metadata.epoch_losses.size(); ++i) {
      line = {{"epoch", i + 1}, {"loss", ckpt.metadata.epoch_losses[i]}};
      loss_log += line.dump() + "\n";
    }
  }
  SaveCheckpoint(ckpt, dir / kCheckpointFile);
  WriteText(dir / kLossFile, loss_log);

  ManifestData m;
  m.seeds["seed"] = f.train.seed;
  m.inputs = {data / corpus::kDatasetFile, data / corpus::kRegistryFile};
  m.outputs = {kCheckpointFile, kLossFile};
  m.extra["model"] = {{"parameters", ckpt.model.params().size()}, {"vocab_size", vocab.size()}};
  if (!ds.registry.empty()) {
    const attack::ProbeResult query = attack::MemorizationProbe(ckpt.model, vocab, ds, false);
    const attack::ProbeResult in_ctx = attack::MemorizationProbe(ckpt.model, vocab, ds, true);
    ojson probe = {{"query_only", {{"hits", query.hits}, {"total", query.total}, {"rate", query.rate()}}},
                   {"in_context", {{"hits", in_ctx.hits}, {"total", in_ctx.total}, {"rate", in_ctx.rate()}}}};
    WriteText(dir / kProbeFile, probe.dump(2) + "\n");
    m.outputs.push_back(kProbeFile);
    m.extra["memorization_probe"] = probe;
    out << "memorization probe: query only " << FormatRate(query.hits, query.total)
        << ", in context " << FormatRate(in_ctx.hits, in_ctx.total) << "\n";
  }
  WriteManifest(dir, inv, m);
  out << "checkpoint written to " << (dir / kCheckpointFile).string() << "\n";
}

// ---- attack -----------------------------------------------------------------

struct AttackFlags {
  std::string checkpoint;
  std::string data;
  std::string out;
  std::string strategy = "greedy";
  int steps = 140;
  int trigger_len = 4;
  int topk_candidates = 256;
  int batch = 64;
  int repeats = 1;
  double split = 0.5;
  std::uint64_t seed = 0;
  int max_length = 0;  // 0: 200 for template registries, 60 for free-style
  int beam_width = 4;
  int sample_k = 50;
  double temperature = 1.0;
  int pairs = 0;
};

struct Loaded {
  Checkpoint ckpt;
  corpus::PiiDataset dataset;
  std::vector<corpus::PiiPair> pairs;
};

Loaded LoadAttackInputs(const AttackFlags& f) {
  if (!fs::exists(f.checkpoint)) throw IoError("no checkpoint at " + f.checkpoint);
  Loaded in{LoadCheckpoint(f.checkpoint), corpus::ReadDataset(f.data), {}};
  if (in.dataset.registry.empty()) throw UsageError("registry has no canaries to attack");
  if (f.pairs < 0) throw UsageError("--pairs must be non-negative");
  const std::size_t n = f.pairs == 0 ? in.dataset.registry.size()
                                     : std::min<std::size_t>(f.pairs, in.dataset.registry.size());
  in.pairs.assign(in.dataset.registry.begin(), in.dataset.registry.begin() + n);
  return in;
}

int ResolvedMaxLength(const AttackFlags& f, const corpus::PiiDataset& ds) {
  if (f.max_length > 0) return f.max_length;
  return ds.mode == corpus::InsertionMode::kFreeStyle ? 60 : 200;
}

DecodingConfig Decoding(const AttackFlags& f, int max_length) {
  DecodingConfig d;
  d.strategy = ParseStrategy(f.strategy);
  d.beam_width = f.beam_width;
  d.sample_k = f.sample_k;
  d.temperature = f.temperature;
  d.max_length = max_length;
  d.seed = f.seed;
  return d;
}

attack::AttackConfig GepConfig(const AttackFlags& f, int max_length, int jobs) {
  attack::AttackConfig c;
  c.iterations = f.steps;
  c.trigger_length = f.trigger_len;
  c.top_k = f.topk_candidates;
  c.batch_size = f.batch;
  c.decoding = Decoding(f, max_length);
  c.seed = f.seed;
  c.repeats = f.repeats;
  c.jobs = jobs;
  return c;
}

void PrintAsr(std::ostream& out, const std::vector<attack::AttackOutcome>& outcomes) {
  const report::AsrReport r = report::ComputeAsr(outcomes);
  out << r.method << " " << StrategyName(r.strategy) << ": ASR "
      << FormatRate(r.successes, r.attacked);
  if (r.repeats() > 1) {
    out << " (" << r.repeats() << " repeats, mean " << std::setprecision(4) << r.mean()
        << ", std " << r.stddev() << std::setprecision(6) << ")";
  }
  out << "\n";
}

void CmdAttack(const std::string& kind, const AttackFlags& f, int jobs, const Invocation& inv,
               std::ostream& out) {
  if (f.split <= 0.0 || f.split >= 1.0) throw UsageError("--split must lie in (0, 1)");
  if (f.repeats < 1) throw UsageError("--repeats must be positive");
  const Loaded in = LoadAttackInputs(f);
  const fs::path dir = ResolveOut(f.out, "attack-" + kind);
  PrepareOut(dir, {fs::path(f.checkpoint), fs::path(f.data)});
  const int max_length = ResolvedMaxLength(f, in.dataset);
  const DecodingConfig decoding = Decoding(f, max_length);
  decoding.Validate(in.ckpt.model.config().vocab_size);

  ManifestData m;
  m.seeds["seed"] = f.seed;
  m.inputs = {fs::path(f.checkpoint), fs::path(f.data) / corpus::kRegistryFile};
  std::vector<attack::AttackOutcome> outcomes;
  int step_budget = 0;
  if (kind == "template-query") {
    outcomes = attack::TemplateQueryAttack(in.ckpt.model, in.ckpt.vocab, in.pairs, decoding,
                                           f.repeats, f.seed, jobs);
  } else if (kind == "gep") {
    outcomes = attack::GepSingle(in.ckpt.model, in.ckpt.vocab, in.pairs, GepConfig(f, max_length, jobs));
    step_budget = f.steps;
  } else {
    if (in.dataset.mode == corpus::InsertionMode::kTemplate) {
      Warn("gep-unified on a template-mode registry; the unified attack targets free-style canaries");
    }
    std::vector<corpus::PiiPair> train, val;
    attack::SplitPairs(in.pairs, f.split, f.seed, train, val);
    const attack::UnifiedResult r =
        attack::GepUnified(in.ckpt.model, in.ckpt.vocab, train, val, GepConfig(f, max_length, jobs));
    outcomes = r.outcomes;
    WriteText(dir / kStepsFile, attack::SerializeStepRecords(r.steps));
    m.outputs.push_back(kStepsFile);
    ojson split = {{"train", ojson::array()}, {"validation", ojson::array()}};
    for (const auto& p : train) split["train"].push_back(p.entry_id);
    for (const auto& p : val) split["validation"].push_back(p.entry_id);
    m.extra["split"] = split;
    for (const auto& c : report::AsrPerStep(r.steps)) {
      out << "repeat " << c.repeat << ": max validation ASR " << std::setprecision(4) << c.max_asr
          << " at step " << c.argmax_step << ", final " << c.final_asr << std::setprecision(6)
          << "\n";
    }
  }
  WriteText(dir / kOutcomesFile, attack::SerializeOutcomes(outcomes));
  m.outputs.insert(m.outputs.begin(), kOutcomesFile);
  m.extra["report"] = {{"attack", kind}, {"step_budget", step_budget}, {"max_length", max_length}};
  WriteManifest(dir, inv, m);
  PrintAsr(out, outcomes);
}

// ---- sweep ------------------------------------------------------------------

struct SweepFlags {
  AttackFlags attack;
  std::vector<int> lengths = {1, 2, 4, 8, 12, 16};
};

void CmdSweep(SweepFlags f, int jobs, const Invocation& inv, std::ostream& out) {
  if (f.lengths.empty()) throw UsageError("--lengths must name at least one trigger length");
  for (int l : f.lengths) {
    if (l < 1) throw UsageError("trigger lengths must be positive");
  }
  if (f.attack.repeats < 1) throw UsageError("--repeats must be positive");
  const Loaded in = LoadAttackInputs(f.attack);
  const fs::path dir = ResolveOut(f.attack.out, "sweep");
  PrepareOut(dir, {fs::path(f.attack.checkpoint), fs::path(f.attack.data)});

  ManifestData m;
  m.seeds["seed"] = f.attack.seed;
  m.inputs = {fs::path(f.attack.checkpoint), fs::path(f.attack.data) / corpus::kRegistryFile};
  const int max_length = ResolvedMaxLength(f.attack, in.dataset);
  std::vector<report::ReportInput> inputs;
  report::ReportOptions options;
  for (int l : f.lengths) {
    AttackFlags af = f.attack;
    af.trigger_len = l;
    const auto outcomes = attack::GepSingle(in.ckpt.model, in.ckpt.vocab, in.pairs, GepConfig(af, max_length, jobs));
    const std::string file = "outcomes_len" + std::to_string(l) + ".jsonl";
    WriteText(dir / file, attack::SerializeOutcomes(outcomes));
    m.outputs.push_back(file);
    const report::AsrReport r = report::ComputeAsr(outcomes);
    options.sweep.push_back({l, r.repeat_asr(), r.mean()});
    out << "trigger length " << l << ": mean ASR " << std::setprecision(4) << r.mean()
        << std::setprecision(6) << "\n";
    report::ReportInput ri;
    ri.method = "gep-len" + std::to_string(l);
    ri.outcomes = outcomes;
    ri.step_budget = f.attack.steps;
    ri.max_length = max_length;
    inputs.push_back(std::move(ri));
  }
  for (auto& name : report::EmitReport(inputs, dir, options)) m.outputs.push_back(name);
  WriteManifest(dir, inv, m);
}

// ---- report -----------------------------------------------------------------

struct ReportFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::vector<std::string> formats = {"csv", "json", "svg"};
  int bucket_width = 10;
  double margin = 0.05;
  std::string out;
};

void CmdReport(const ReportFlags& f, const Invocation& inv, std::ostream& out) {
  if (f.inputs.empty()) throw UsageError("report needs at least one outcome file or directory");
  if (!f.labels.empty() && f.labels.size() != f.inputs.size()) {
    throw UsageError("--labels must name every input");
  }
  const fs::path dir = ResolveOut(f.out, "report");
  ManifestData m;
  std::vector<report::ReportInput> inputs;
  for (std::size_t i = 0; i < f.inputs.size(); ++i) {
    const fs::path path(f.inputs[i]);
    const fs::path file = fs::is_directory(path) ? path / kOutcomesFile : path;
    const fs::path run_dir = file.parent_path();
    report::ReportInput ri;
    ri.outcomes = attack::ParseOutcomes(ReadText(file));
    m.inputs.push_back(file);
    if (fs::exists(run_dir / kStepsFile) && fs::is_directory(path)) {
      ri.steps = attack::ParseStepRecords(ReadText(run_dir / kStepsFile));
      m.inputs.push_back(run_dir / kStepsFile);
    }
    if (fs::exists(run_dir / kManifestFile)) {
      const ojson manifest = ojson::parse(ReadText(run_dir / kManifestFile), nullptr, false);
      if (manifest.is_discarded()) throw FormatError("malformed " + (run_dir / kManifestFile).string());
      if (manifest.contains("report")) {
        ri.step_budget = manifest["report"].value("step_budget", 0);
        ri.max_length = manifest["report"].value("max_length", 0);
      }
    }
    if (!ri.steps.empty()) ri.step_budget = 0;
    if (!f.labels.empty()) ri.method = f.labels[i];
    inputs.push_back(std::move(ri));
  }
  PrepareOut(dir, {});
  for (const auto& in : f.inputs) {
    std::error_code ec;
    const fs::path p(in);
    if (fs::equivalent(fs::is_directory(p) ? p : p.parent_path(), dir, ec)) {
      throw UsageError("report output directory would overwrite inputs");
    }
  }
  report::ReportOptions options;
  options.csv = std::find(f.formats.begin(), f.formats.end(), "csv") != f.formats.end();
  options.json = std::find(f.formats.begin(), f.formats.end(), "json") != f.formats.end();
  options.svg = std::find(f.formats.begin(), f.formats.end(), "svg") != f.formats.end();
  options.bucket_width = f.bucket_width;
  options.chart_margin = f.margin;
  m.outputs = report::EmitReport(inputs, dir, options);
  WriteManifest(dir, inv, m);
  for (const auto& in : inputs) PrintAsr(out, in.outcomes);
  out << "wrote " << m.outputs.size() << " report files to " << dir.string() << "\n";
}

void AddAttackOptions(CLI::App* app, AttackFlags& f, bool unified_flags) {
  app->add_option("--checkpoint", f.checkpoint, "Trained checkpoint file")->required();
  app->add_option("--data", f.data, "Dataset directory holding the registry")->required();
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--strategy", f.strategy, "Decoding strategy")
      ->check(CLI::IsMember({"greedy", "beam", "topk"}))
      ->capture_default_str();
  app->add_option("--steps", f.steps, "Optimisation steps per attack")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--trigger-len", f.trigger_len, "Trigger length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--topk-candidates", f.topk_candidates, "Candidates per trigger position")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--batch", f.batch, "Proposals evaluated per step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--repeats", f.repeats, "Independent repeats")->capture_default_str();
  if (unified_flags) {
    app->add_option("--split", f.split, "Training share of the canary split")->capture_default_str();
  }
  app->add_option("--seed", f.seed, "Base seed")->capture_default_str();
  app->add_option("--max-length", f.max_length,
                  "Generated tokens per probe (0: 200 template, 60 free-style)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--beam-width", f.beam_width, "Beam width")->capture_default_str();
  app->add_option("--sample-k", f.sample_k, "Top-k sampling k")->capture_default_str();
  app->add_option("--temperature", f.temperature, "Sampling temperature")->capture_default_str();
  app->add_option("--pairs", f.pairs, "Attack only the first N canaries (0 = all)")
      ->capture_default_str();
}

}  // namespace

std::string FileFingerprint(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h = Fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy audit toolkit: canary corpora, training, extraction attacks, reports",
               "pii_audit"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads; never changes output bytes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  GenCorpusFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-corpus", "Generate a canary-injected corpus");
  gen_cmd->add_option("--entries", gen.entries, "Base corpus entries")->capture_default_str();
  gen_cmd->add_option("--canaries", gen.canaries, "Inserted canary pairs")->capture_default_str();
  gen_cmd->add_option("--mode", gen.mode, "Insertion mode")
      ->check(CLI::IsMember({"template", "freestyle", "free-style"}))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory");

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on a generated corpus");
  train_cmd->add_option("--data", train.data, "Dataset directory")->required();
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_option("--batch", train.train.batch_size, "Batch size")->capture_default_str();
  train_cmd->add_option("--lr", train.train.learning_rate, "Peak learning rate")->capture_default_str();
  train_cmd->add_option("--warmup", train.train.warmup_ratio, "Warmup ratio")->capture_default_str();
  train_cmd->add_option("--epochs", train.train.epochs, "Epochs")->capture_default_str();
  train_cmd->add_option("--extra-epochs", train.train.extra_epochs, "Extra memorization epochs")
      ->capture_default_str();
  train_cmd->add_option("--weight-decay", train.train.weight_decay, "AdamW weight decay")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.train.seed, "Seed")->capture_default_str();
  train_cmd->add_option("--layers", train.model.n_layers, "Transformer blocks")->capture_default_str();
  train_cmd->add_option("--d-model", train.model.d_model, "Model width")->capture_default_str();
  train_cmd->add_option("--heads", train.model.n_heads, "Attention heads")->capture_default_str();
  train_cmd->add_option("--d-ff", train.model.d_ff, "Feed-forward width")->capture_default_str();
  train_cmd->add_option("--context", train.model.max_context, "Context window")->capture_default_str();
  train_cmd->add_option("--min-freq", train.min_freq, "Vocabulary frequency cut-off")
      ->capture_default_str();

  CLI::App* attack_cmd = app.add_subcommand("attack", "Run an extraction attack");
  attack_cmd->require_subcommand(1);
  attack_cmd->fallthrough();
  std::map<std::string, AttackFlags> attack_flags;
  std::vector<std::pair<std::string, CLI::App*>> attack_subs;
  for (const auto& [name, desc] :
       std::vector<std::pair<std::string, std::string>>{
           {"template-query", "Query with the template prefix only"},
           {"gep", "Per-canary gradient-guided trigger search"},
           {"gep-unified", "One shared trigger learned on a training split"}}) {
    CLI::App* sub = attack_cmd->add_subcommand(name, desc);
    AddAttackOptions(sub, attack_flags[name], name == "gep-unified");
    attack_subs.emplace_back(name, sub);
  }

  SweepFlags sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "GEP over several trigger lengths");
  AddAttackOptions(sweep_cmd, sweep.attack, false);
  sweep_cmd->add_option("--lengths", sweep.lengths, "Trigger lengths")
      ->delimiter(',')
      ->capture_default_str();

  ReportFlags rep;
  CLI::App* report_cmd = app.add_subcommand("report", "Render reports from attack outcomes");
  report_cmd->add_option("inputs", rep.inputs, "Outcome files or attack output directories");
  report_cmd->add_option("--labels", rep.labels, "Method label per input")->delimiter(',');
  report_cmd->add_option("--format", rep.formats, "Formats: csv,json,svg")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();
  report_cmd->add_option("--bucket-width", rep.bucket_width, "Position histogram bucket width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  report_cmd->add_option("--margin", rep.margin, "Chart axis margin")->capture_default_str();
  report_cmd->add_option("--out", rep.out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  Invocation inv;
  inv.argv.assign(args.begin(), args.end());
  try {
    if (gen_cmd->parsed()) {
      inv.command = "gen-corpus";
      inv.config = OptionSnapshot(*gen_cmd);
      CmdGenCorpus(gen, inv, out);
    } else if (train_cmd->parsed()) {
      inv.command = "train";
      inv.config = OptionSnapshot(*train_cmd);
      CmdTrain(train, inv, out);
    } else if (attack_cmd->parsed()) {
      for (const auto& [name, sub] : attack_subs) {
        if (!sub->parsed()) continue;
        inv.command = "attack " + name;
        inv.config = OptionSnapshot(*sub);
        inv.config["jobs"] = std::to_string(jobs);
        CmdAttack(name, attack_flags[name], jobs, inv, out);
      }
    } else if (sweep_cmd->parsed()) {
      inv.command = "sweep";
      inv.config = OptionSnapshot(*sweep_cmd);
      inv.config["jobs"] = std::to_string(jobs);
      CmdSweep(sweep, jobs, inv, out);
    } else if (report_cmd->parsed()) {
      inv.command = "report";
      inv.config = OptionSnapshot(*report_cmd);
      CmdReport(rep, inv, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ComputationError& e) {
    err << "computation error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace piiaudit::cli
