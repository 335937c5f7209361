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

#include "piiaudit/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "piiaudit/errors.hpp"
#include "piiaudit/log.hpp"
#include "piiaudit/rng.hpp"

namespace piiaudit {
namespace {

// Prompt plus generated tokens with a KV cache over the trailing window.
class Stream {
 public:
  Stream(const Model& model, std::span<const TokenId> prompt)
      : model_(&model), window_(model.config().max_context), seq_(prompt.begin(), prompt.end()) {
    if (seq_.empty()) throw InvalidArgument("empty prompt");
    std::size_t start = 0;
    if (seq_.size() > window_) {
      start = seq_.size() - window_;
      WarnTruncation();
    }
    cache_ = model.Prefill(std::span<const TokenId>(seq_).subspan(start), &logits_);
  }

  const std::vector<float>& logits() const { return logits_; }

  void Push(TokenId token) {
    seq_.push_back(token);
    if (static_cast<std::size_t>(cache_.length) < window_) {
      logits_ = model_->Extend(cache_, std::span<const TokenId>(&token, 1));
      return;
    }
    WarnTruncation();
    cache_ = model_->Prefill(std::span<const TokenId>(seq_).subspan(seq_.size() - window_),
                             &logits_);
  }

 private:
  void WarnTruncation() {
    if (warned_) return;
    warned_ = true;
    Warn("generation context exceeds " + std::to_string(window_) +
         " tokens; dropping the oldest tokens");
  }

  const Model* model_;
  std::size_t window_;
  std::vector<TokenId> seq_;
  KvCache cache_;
  std::vector<float> logits_;
  bool warned_ = false;
};

std::vector<double> LogSoftmax(std::span<const float> logits) {
  double max = -INFINITY;
  for (float v : logits) max = std::max(max, static_cast<double>(v));
  double sum = 0.0;
  for (float v : logits) sum += std::exp(static_cast<double>(v) - max);
  const double lse = max + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = static_cast<double>(logits[i]) - lse;
  return out;
}

void CheckMaxLen(int max_len) {
  if (max_len < 1) throw InvalidArgument("max generation length must be >= 1");
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kGreedy:
      return "greedy";
    case Strategy::kBeam:
      return "beam";
    case Strategy::kTopK:
      return "topk";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "beam") return Strategy::kBeam;
  if (name == "topk") return Strategy::kTopK;
  throw InvalidArgument("unknown decoding strategy: " + std::string(name));
}

void DecodingConfig::Validate(int vocab_size) const {
  if (beam_width < 1) throw InvalidArgument("beam width must be >= 1");
  if (sample_k < 1 || (strategy == Strategy::kTopK && sample_k > vocab_size)) {
    throw InvalidArgument("sample k must lie in [1, " + std::to_string(vocab_size) + "]");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw InvalidArgument("temperature must be positive");
  }
  CheckMaxLen(max_length);
}

std::vector<TokenId> TopKIds(std::span<const float> logits, int k) {
  const int n = static_cast<int>(logits.size());
  k = std::clamp(k, 0, n);
  std::vector<TokenId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), [&](TokenId a, TokenId b) {
    return logits[a] > logits[b] || (logits[a] == logits[b] && a < b);
  });
  ids.resize(k);
  return ids;
}

std::vector<TokenId> GenerateGreedy(const Model& model, std::span<const TokenId> prompt,
                                    int max_len) {
  CheckMaxLen(max_len);
  Stream stream(model, prompt);
  std::vector<TokenId> out;
  for (int step = 0; step < max_len; ++step) {
    const TokenId next = TopKIds(stream.logits(), 1)[0];
    if (next == Vocab::kEos) break;
    out.push_back(next);
    if (step + 1 < max_len) stream.Push(next);
  }
  return out;
}

double BeamHypothesis::score() const {
  const std::size_t length = tokens.size() + (finished ? 1 : 0);
  return length == 0 ? 0.0 : log_prob / static_cast<double>(length);
}

BeamHypothesis BeamSearch(const Model& model, std::span<const TokenId> prompt, int width,
                          int max_len) {
  if (width < 1) throw InvalidArgument("beam width must be >= 1");
  CheckMaxLen(max_len);

  struct Beam {
    Stream stream;
    std::vector<TokenId> tokens;
    double log_prob = 0.0;
  };
  struct Candidate {
    int parent;
    TokenId token;
    double log_prob;
  };

  std::vector<Beam> active;
  active.push_back(Beam{Stream(model, prompt), {}, 0.0});
  std::vector<BeamHypothesis> done;

  for (int step = 0; step < max_len && !active.empty(); ++step) {
    std::vector<Candidate> cands;
    for (int b = 0; b < static_cast<int>(active.size()); ++b) {
      const std::vector<float>& logits = active[b].stream.logits();
      const std::vector<double> lsm = LogSoftmax(logits);
      for (TokenId id : TopKIds(logits, width)) {
        cands.push_back({b, id, active[b].log_prob + lsm[id]});
      }
    }
    // Parents share a common length, so comparing parent sequences then the
    // new token is a lexicographic comparison of the extended sequences.
    std::sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
      if (x.log_prob != y.log_prob) return x.log_prob > y.log_prob;
      const auto& tx = active[x.parent].tokens;
      const auto& ty = active[y.parent].tokens;
      if (tx != ty) return tx < ty;
      return x.token < y.token;
    });
    if (static_cast<int>(cands.size()) > width) cands.resize(width);

    std::vector<int> children(active.size(), 0);
    for (const Candidate& c : cands) {
      if (c.token != Vocab::kEos) ++children[c.parent];
    }
    const bool last_step = step + 1 == max_len;
    std::vector<Beam> next;
    for (const Candidate& c : cands) {
      Beam& parent = active[c.parent];
      std::vector<TokenId> tokens = parent.tokens;
      if (c.token == Vocab::kEos) {
        done.push_back({std::move(tokens), true, c.log_prob});
        continue;
      }
      tokens.push_back(c.token);
      if (last_step) {
        done.push_back({std::move(tokens), false, c.log_prob});
        continue;
      }
      Stream stream = --children[c.parent] == 0 ? std::move(parent.stream) : parent.stream;
      stream.Push(c.token);
      next.push_back(Beam{std::move(stream), std::move(tokens), c.log_prob});
    }
    active = std::move(next);
  }

  return *std::min_element(done.begin(), done.end(),
                           [](const BeamHypothesis& a, const BeamHypothesis& b) {
                             const double sa = a.score(), sb = b.score();
                             if (sa != sb) return sa > sb;
                             if (a.tokens != b.tokens) return a.tokens < b.tokens;
                             return a.finished && !b.finished;
                           });
}

std::vector<TokenId> GenerateBeam(const Model& model, std::span<const TokenId> prompt, int width,
                                  int max_len) {
  return BeamSearch(model, prompt, width, max_len).tokens;
}

std::vector<TokenId> GenerateTopK(const Model& model, std::span<const TokenId> prompt, int k,
                                  double temperature, int max_len, std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("sample k must be >= 1");
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be positive");
  CheckMaxLen(max_len);
  Rng rng(seed);
  Stream stream(model, prompt);
  std::vector<TokenId> out;
  std::vector<double> weights;
  for (int step = 0; step < max_len; ++step) {
    const std::vector<float>& logits = stream.logits();
    const std::vector<TokenId> ids = TopKIds(logits, k);
    const double top = logits[ids[0]];
    weights.clear();
    double total = 0.0;
    for (TokenId id : ids) {
      weights.push_back(std::exp((static_cast<double>(logits[id]) - top) / temperature));
      total += weights.back();
    }
    double u = rng.Unit() * total;
    TokenId next = ids.back();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (u < weights[i]) {
        next = ids[i];
        break;
      }
      u -= weights[i];
    }
    if (next == Vocab::kEos) break;
    out.push_back(next);
    if (step + 1 < max_len) stream.Push(next);
  }
  return out;
}

std::vector<TokenId> Generate(const Model& model, std::span<const TokenId> prompt,
                              const DecodingConfig& config) {
  config.Validate(model.config().vocab_size);
  switch (config.strategy) {
    case Strategy::kGreedy:
      return GenerateGreedy(model, prompt, config.max_length);
    case Strategy::kBeam:
      return GenerateBeam(model, prompt, config.beam_width, config.max_length);
    case Strategy::kTopK:
      return GenerateTopK(model, prompt, config.sample_k, config.temperature, config.max_length,
                          config.seed);
  }
  throw InvalidArgument("unknown decoding strategy");
}

}  // namespace piiaudit
