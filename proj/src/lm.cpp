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
#include <string>

#include "piiaudit/errors.hpp"

namespace piiaudit {
namespace {

void CheckSpan(std::span<const TokenId> context, TokenSpan target) {
  if (target.size() <= 0) throw InvalidArgument("target span is empty");
  if (target.begin < 1 || target.end > static_cast<int>(context.size())) {
    throw InvalidArgument("target span [" + std::to_string(target.begin) + ", " +
                          std::to_string(target.end) + ") outside context of length " +
                          std::to_string(context.size()));
  }
}

}  // namespace

double NllSpan(const Model& model, std::span<const TokenId> context, TokenSpan target) {
  CheckSpan(context, target);
  // Only rows target.begin-1 .. target.end-2 predict span tokens.
  std::vector<std::vector<TokenId>> seq{
      std::vector<TokenId>(context.begin(), context.begin() + target.end - 1)};
  std::vector<int> rows;
  for (int t = target.begin; t < target.end; ++t) rows.push_back(t - 1);
  Matrix logits = model.ForwardBatch(seq, nullptr, rows);
  double total = 0.0;
  for (int i = 0; i < logits.rows(); ++i) {
    total += TokenNll({logits.row(i), static_cast<std::size_t>(logits.cols())},
                      context[target.begin + i]);
  }
  return total / target.size();
}

GradientSlice GradOneHot(const Model& model, std::span<const TokenId> prompt,
                         std::span<const int> trigger_positions, TokenSpan target) {
  CheckSpan(prompt, target);
  if (trigger_positions.empty()) throw InvalidArgument("no trigger positions");
  for (int p : trigger_positions) {
    if (p < 0 || p >= static_cast<int>(prompt.size())) throw InvalidArgument("trigger position out of range");
    if (p >= target.begin) throw InvalidArgument("trigger positions must precede the target span");
  }
  const int v = model.config().vocab_size;
  std::vector<std::vector<TokenId>> seq{
      std::vector<TokenId>(prompt.begin(), prompt.begin() + target.end - 1)};
  ForwardTape tape;
  Matrix logits = model.ForwardTraining(seq, tape);
  Matrix dlogits(logits.rows(), v);
  const float scale = 1.0f / static_cast<float>(target.size());
  double loss = 0.0;
  for (int t = target.begin; t < target.end; ++t) {
    loss += NllGradient({logits.row(t - 1), static_cast<std::size_t>(v)}, prompt[t], scale,
                        {dlogits.row(t - 1), static_cast<std::size_t>(v)});
  }
  Matrix dx = model.Backward(tape, dlogits, {});

  Matrix picked(static_cast<int>(trigger_positions.size()), model.config().d_model);
  for (std::size_t i = 0; i < trigger_positions.size(); ++i) {
    const float* src = dx.row(trigger_positions[i]);
    std::copy_n(src, picked.cols(), picked.row(static_cast<int>(i)));
  }
  GradientSlice out;
  out.grad.Resize(picked.rows(), v);
  MatMulTransB(picked, model.Tensor("wte"), out.grad);
  out.positions.assign(trigger_positions.begin(), trigger_positions.end());
  out.prompt.assign(prompt.begin(), prompt.end());
  out.target = target;
  out.loss = loss / target.size();
  for (float g : out.grad.values()) {
    if (!std::isfinite(g)) throw ComputationError("non-finite one-hot gradient");
  }
  return out;
}

}  // namespace piiaudit
