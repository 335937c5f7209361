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

#include "piiaudit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "piiaudit/errors.hpp"
#include "piiaudit/rng.hpp"

namespace piiaudit {
namespace {

class AdamW {
 public:
  AdamW(const TrainConfig& cfg, std::size_t n) : cfg_(cfg), m_(n, 0.0f), v_(n, 0.0f) {}

  void Step(std::span<float> params, std::span<const float> grads, std::span<const char> decay,
            double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    const auto b1 = static_cast<float>(cfg_.beta1);
    const auto b2 = static_cast<float>(cfg_.beta2);
    const auto step = static_cast<float>(lr / bc1);
    const auto inv_bc2 = static_cast<float>(1.0 / bc2);
    const auto eps = static_cast<float>(cfg_.adam_eps);
    const auto wd = static_cast<float>(lr * cfg_.weight_decay);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = b1 * m_[i] + (1.0f - b1) * grads[i];
      v_[i] = b2 * v_[i] + (1.0f - b2) * grads[i] * grads[i];
      if (decay[i]) params[i] -= wd * params[i];
      params[i] -= step * m_[i] / (std::sqrt(v_[i] * inv_bc2) + eps);
    }
  }

 private:
  TrainConfig cfg_;
  std::vector<float> m_, v_;
  std::int64_t t_ = 0;
};

double LearningRate(const TrainConfig& cfg, std::int64_t step, std::int64_t total,
                    std::int64_t warmup) {
  if (step < warmup) return cfg.learning_rate * static_cast<double>(step + 1) / warmup;
  const double span = static_cast<double>(std::max<std::int64_t>(1, total - warmup));
  const double progress = static_cast<double>(step - warmup) / span;
  return cfg.learning_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

// Fills dlogits for next-token prediction over every packed row; returns the
// summed NLL and the number of predicted tokens.
std::pair<double, long> LossGradient(const Matrix& logits,
                                     std::span<const std::vector<TokenId>> batch, float scale,
                                     Matrix* dlogits) {
  const int v = logits.cols();
  double total = 0.0;
  long count = 0;
  int row = 0;
  for (const auto& seq : batch) {
    for (std::size_t j = 0; j < seq.size(); ++j, ++row) {
      if (j + 1 == seq.size()) continue;
      std::span<const float> lrow{logits.row(row), static_cast<std::size_t>(v)};
      if (dlogits) {
        total += NllGradient(lrow, seq[j + 1], scale,
                             {dlogits->row(row), static_cast<std::size_t>(v)});
      } else {
        total += TokenNll(lrow, seq[j + 1]);
      }
      ++count;
    }
  }
  return {total, count};
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size <= 0) throw InvalidArgument("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  if (!(warmup_ratio >= 0.0 && warmup_ratio < 1.0)) throw InvalidArgument("warmup_ratio must be in [0, 1)");
  if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
  if (extra_epochs < 0) throw InvalidArgument("extra_epochs must be non-negative");
}

double MeanLoss(const Model& model, std::span<const std::vector<TokenId>> sequences,
                int batch_size) {
  double total = 0.0;
  long count = 0;
  for (std::size_t start = 0; start < sequences.size(); start += batch_size) {
    auto batch = sequences.subspan(start, std::min<std::size_t>(batch_size, sequences.size() - start));
    Matrix logits = model.ForwardBatch(batch, nullptr);
    auto [sum, n] = LossGradient(logits, batch, 1.0f, nullptr);
    total += sum;
    count += n;
  }
  return count ? total / count : 0.0;
}

Checkpoint Train(const Vocab& vocab, std::span<const std::vector<TokenId>> sequences,
                 ModelConfig model_config, const TrainConfig& cfg,
                 const std::string& corpus_fingerprint, const EpochCallback& on_epoch) {
  cfg.Validate();
  if (sequences.empty()) throw InvalidArgument("training dataset is empty");
  model_config.vocab_size = vocab.size();
  model_config.Validate();
  for (const auto& s : sequences) {
    if (s.size() < 2) throw InvalidArgument("training sequence shorter than two tokens");
    if (static_cast<int>(s.size()) > model_config.max_context) {
      throw InvalidArgument("training sequence of " + std::to_string(s.size()) +
                            " tokens exceeds max_context " + std::to_string(model_config.max_context));
    }
  }

  Model model = Model::Initialize(model_config, cfg.seed);
  std::vector<char> decay(model.num_params(), 0);
  for (const auto& t : model.tensors()) {
    if (t.rows > 1) std::fill_n(decay.begin() + static_cast<std::ptrdiff_t>(t.offset), t.count(), 1);
  }

  const auto n = static_cast<std::int64_t>(sequences.size());
  const std::int64_t per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const std::int64_t total_steps = per_epoch * cfg.total_epochs();
  const auto warmup = static_cast<std::int64_t>(std::ceil(cfg.warmup_ratio * total_steps));

  TrainingMetadata md;
  md.seed = cfg.seed;
  md.corpus_fingerprint = corpus_fingerprint;
  md.initial_loss = MeanLoss(model, sequences, cfg.batch_size);
  if (!std::isfinite(md.initial_loss)) throw ComputationError("non-finite loss at initialization");

  AdamW opt(cfg, model.num_params());
  std::vector<float> grads(model.num_params());
  std::vector<std::size_t> order(sequences.size());
  std::vector<std::vector<TokenId>> batch;
  std::int64_t step = 0;
  for (int epoch = 0; epoch < cfg.total_epochs(); ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(DeriveSeed(cfg.seed, "train.shuffle", {static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), rng.engine());
    double epoch_sum = 0.0;
    long epoch_count = 0;
    for (std::int64_t b = 0; b < per_epoch; ++b, ++step) {
      batch.clear();
      const std::size_t lo = static_cast<std::size_t>(b) * cfg.batch_size;
      const std::size_t hi = std::min(order.size(), lo + cfg.batch_size);
      for (std::size_t i = lo; i < hi; ++i) batch.push_back(sequences[order[i]]);
      long predicted = 0;
      for (const auto& s : batch) predicted += static_cast<long>(s.size()) - 1;

      ForwardTape tape;
      Matrix logits = model.ForwardTraining(batch, tape);
      Matrix dlogits(logits.rows(), logits.cols());
      auto [sum, count] = LossGradient(logits, batch, 1.0f / static_cast<float>(predicted), &dlogits);
      if (!std::isfinite(sum)) {
        throw ComputationError("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch + 1) + ", step " + std::to_string(step + 1));
      }
      epoch_sum += sum;
      epoch_count += count;

      std::fill(grads.begin(), grads.end(), 0.0f);
      model.Backward(tape, dlogits, grads);
      double norm2 = 0.0;
      for (float g : grads) norm2 += static_cast<double>(g) * g;
      const double norm = std::sqrt(norm2);
      if (!std::isfinite(norm)) {
        throw ComputationError("training diverged: non-finite gradient at step " + std::to_string(step + 1));
      }
      if (cfg.max_grad_norm > 0.0 && norm > cfg.max_grad_norm) {
        const auto s = static_cast<float>(cfg.max_grad_norm / norm);
        for (float& g : grads) g *= s;
      }
      opt.Step(model.params(), grads, decay, LearningRate(cfg, step, total_steps, warmup));
    }
    md.epoch_losses.push_back(epoch_sum / static_cast<double>(epoch_count));
    if (on_epoch) on_epoch({epoch + 1, md.epoch_losses.back(), step});
  }
  md.global_step = step;
  md.final_loss = MeanLoss(model, sequences, cfg.batch_size);
  return Checkpoint{vocab, std::move(model), std::move(md)};
}

}  // namespace piiaudit
