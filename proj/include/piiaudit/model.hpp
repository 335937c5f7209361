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
#include <string>
#include <string_view>
#include <vector>

#include "piiaudit/tensor.hpp"
#include "piiaudit/vocab.hpp"

namespace piiaudit {

struct ModelConfig {
  int n_layers = 4;
  int n_heads = 4;
  int d_model = 192;
  int d_ff = 768;
  int max_context = 256;
  int vocab_size = 0;

  int head_dim() const { return d_model / n_heads; }
  // Throws InvalidArgument when a field is non-positive or d_model is not a
  // multiple of n_heads.
  void Validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct TensorInfo {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::size_t offset = 0;

  std::size_t count() const { return static_cast<std::size_t>(rows) * cols; }
};

// Per-layer key/value rows for incremental decoding and shared-prefix
// scoring. Row i holds position i.
struct KvCache {
  int length = 0;
  std::vector<Matrix> keys;
  std::vector<Matrix> values;
};

class ForwardTape;

// Pre-LayerNorm decoder-only transformer (learned positions, GELU MLP,
// untied output head). All parameters live in one flat float buffer.
//
// Inference methods are const and keep no shared scratch, so one Model may be
// queried from many threads at once.
class Model {
 public:
  explicit Model(const ModelConfig& config);

  // Gaussian(0, 0.02) weights, unit LayerNorm gains, zero biases.
  static Model Initialize(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  std::span<float> params() { return params_; }
  std::span<const float> params() const { return params_; }
  std::size_t num_params() const { return params_.size(); }

  const TensorInfo& Info(std::string_view name) const;
  ConstMatView Tensor(std::string_view name) const;
  MatView MutableTensor(std::string_view name);

  // Next-token logits for every position of one sequence (length x V).
  // Throws InvalidArgument when the sequence exceeds max_context.
  Matrix Forward(std::span<const TokenId> ids) const;

  // Packed forward over independent sequences that all continue `prefix`
  // (nullptr for none). Rows of the result follow the sequences back to back.
  // When `logit_rows` is non-empty only those packed rows are projected to
  // the vocabulary, in the given order.
  Matrix ForwardBatch(std::span<const std::vector<TokenId>> sequences, const KvCache* prefix,
                      std::span<const int> logit_rows = {}) const;

  // Starts a cache holding `ids` and returns the logits of its last row.
  KvCache Prefill(std::span<const TokenId> ids, std::vector<float>* last_logits = nullptr) const;

  // Appends `ids` to the cache; returns the logits of the last appended row.
  std::vector<float> Extend(KvCache& cache, std::span<const TokenId> ids) const;

  // Forward with activations recorded for Backward. Prefix caches are not
  // supported on this path.
  Matrix ForwardTraining(std::span<const std::vector<TokenId>> sequences, ForwardTape& tape) const;

  // Accumulates parameter gradients into `grads` (same layout as params) and
  // returns d loss / d input embedding for every packed row.
  Matrix Backward(const ForwardTape& tape, ConstMatView dlogits, std::span<float> grads) const;

 private:
  struct LayerOffsets {
    std::size_t ln1_g, ln1_b, w_qkv, b_qkv, w_o, b_o, ln2_g, ln2_b, w_fc, b_fc, w_proj, b_proj;
  };

  void AddTensor(std::string name, int rows, int cols);
  ConstMatView At(std::size_t offset, int rows, int cols) const {
    return {params_.data() + offset, rows, cols};
  }
  Matrix Run(std::span<const std::vector<TokenId>> sequences, const KvCache* prefix,
             KvCache* append, ForwardTape* tape, std::span<const int> logit_rows) const;

  ModelConfig config_;
  std::vector<TensorInfo> tensors_;
  std::vector<float> params_;
  std::vector<LayerOffsets> layers_;
  std::size_t wte_ = 0, wpe_ = 0, lnf_g_ = 0, lnf_b_ = 0, w_head_ = 0, b_head_ = 0;
};

// Activations kept by ForwardTraining.
class ForwardTape {
 public:
  struct Layer {
    Matrix x_in, ln1, qkv, attn, x_mid, ln2, fc_pre, fc_act;
    std::vector<float> ln1_mean, ln1_rstd, ln2_mean, ln2_rstd;
    std::vector<float> probs;  // per sequence, per head, n x n row-major
  };
  std::vector<int> seq_offsets;  // packed row offset of each sequence, plus end
  std::vector<TokenId> ids;      // packed input tokens
  std::vector<int> positions;    // packed absolute positions
  std::vector<Layer> layers;
  Matrix x_final, lnf;
  std::vector<float> lnf_mean, lnf_rstd;
  int rows() const { return seq_offsets.empty() ? 0 : seq_offsets.back(); }
};

// -log softmax(row)[target], evaluated in double.
double TokenNll(std::span<const float> logits_row, TokenId target);

// Writes softmax(row) - onehot(target), scaled, into `out`; returns the NLL.
double NllGradient(std::span<const float> logits_row, TokenId target, float scale,
                   std::span<float> out);

}  // namespace piiaudit
