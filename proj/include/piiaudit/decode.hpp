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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "piiaudit/model.hpp"

namespace piiaudit {

enum class Strategy { kGreedy, kBeam, kTopK };

std::string_view StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

struct DecodingConfig {
  Strategy strategy = Strategy::kGreedy;
  int beam_width = 4;
  int sample_k = 50;
  double temperature = 1.0;
  int max_length = 200;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless width >= 1, sample_k >= 1 (and at most
  // vocab_size for top-k sampling), temperature > 0 and max_length >= 1.
  void Validate(int vocab_size) const;
};

// All generators return the continuation only. Generation stops at eos (not
// included in the result) or after max_len tokens. When prompt plus
// continuation outgrow the context window the oldest tokens are dropped and
// a warning is logged.

// Argmax at each step, ties to the lowest id.
std::vector<TokenId> GenerateGreedy(const Model& model, std::span<const TokenId> prompt,
                                    int max_len);

struct BeamHypothesis {
  std::vector<TokenId> tokens;  // without eos
  bool finished = false;        // ended with eos
  double log_prob = 0.0;        // summed, eos included when finished
  // log_prob / length, where length counts eos for finished hypotheses.
  double score() const;
};

// Length-normalised beam search. Every step keeps the `width` expansions with
// the highest summed log-probability; expansions ending in eos retire as
// finished. The result is the best-scoring hypothesis among all finished ones
// and those still open at max_len; ties go to the lexicographically smallest
// token sequence.
BeamHypothesis BeamSearch(const Model& model, std::span<const TokenId> prompt, int width,
                          int max_len);

std::vector<TokenId> GenerateBeam(const Model& model, std::span<const TokenId> prompt, int width,
                                  int max_len);

// Samples from softmax(logits / temperature) restricted to the k highest
// logits (ties to the lowest id).
std::vector<TokenId> GenerateTopK(const Model& model, std::span<const TokenId> prompt, int k,
                                  double temperature, int max_len, std::uint64_t seed);

// The ids of the k largest entries, largest first, ties to the lowest id.
std::vector<TokenId> TopKIds(std::span<const float> logits, int k);

// Dispatches on config.strategy after validating it.
std::vector<TokenId> Generate(const Model& model, std::span<const TokenId> prompt,
                              const DecodingConfig& config);

}  // namespace piiaudit
