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

#include <span>
#include <vector>

#include "piiaudit/model.hpp"

namespace piiaudit {

// Half-open token range [begin, end) inside a context.
struct TokenSpan {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
};

// Mean negative log-likelihood of context[span] given all preceding tokens.
// The span must be non-empty, start at index >= 1 and lie inside the context.
double NllSpan(const Model& model, std::span<const TokenId> context, TokenSpan target);

// d NllSpan / d(one-hot input) at each trigger position: one row per position,
// one column per vocabulary id. Realised as the embedding gradient at that
// position times the token-embedding matrix transposed.
struct GradientSlice {
  Matrix grad;
  std::vector<int> positions;
  std::vector<TokenId> prompt;
  TokenSpan target;
  double loss = 0.0;
};

// Throws InvalidArgument when a trigger position is out of range or not
// strictly before the target span.
GradientSlice GradOneHot(const Model& model, std::span<const TokenId> prompt,
                         std::span<const int> trigger_positions, TokenSpan target);

}  // namespace piiaudit
