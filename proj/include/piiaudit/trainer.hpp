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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "piiaudit/checkpoint.hpp"

namespace piiaudit {

// Defaults follow the finetuning recipe of the audited chatbot: batch 16,
// learning rate 2e-5, 3% warmup, cosine decay, AdamW, 3 epochs.
struct TrainConfig {
  int batch_size = 16;
  double learning_rate = 2e-5;
  double warmup_ratio = 0.03;
  int epochs = 3;
  // Additional memorization epochs appended to the schedule.
  int extra_epochs = 0;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double max_grad_norm = 1.0;
  std::uint64_t seed = 0;

  int total_epochs() const { return epochs + extra_epochs; }
  void Validate() const;
};

struct EpochReport {
  int epoch = 0;
  double mean_loss = 0.0;
  std::int64_t global_step = 0;
};

using EpochCallback = std::function<void(const EpochReport&)>;

// Token-weighted mean next-token loss over the sequences.
double MeanLoss(const Model& model, std::span<const std::vector<TokenId>> sequences,
                int batch_size = 16);

// Trains a freshly initialised model on the tokenised sequences (each already
// framed with bos/eos). Deterministic for a given seed. Throws
// ComputationError on a non-finite loss.
Checkpoint Train(const Vocab& vocab, std::span<const std::vector<TokenId>> sequences,
                 ModelConfig model_config, const TrainConfig& train_config,
                 const std::string& corpus_fingerprint, const EpochCallback& on_epoch = {});

}  // namespace piiaudit
