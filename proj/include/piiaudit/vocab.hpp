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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace piiaudit {

using TokenId = int;

// Splits text into word-level tokens: runs of letters/digits (with inner
// apostrophes and hyphens) form one token, every other non-space character is
// its own token. Bytes >= 0x80 count as letters so UTF-8 words stay whole.
std::vector<std::string> Tokenize(std::string_view text);

// Joins tokens with single spaces, without a space before closing
// punctuation or after an opening parenthesis.
std::string Detokenize(std::span<const std::string> tokens);

// Canonical form of text under the tokenizer: Detokenize(Tokenize(text)).
std::string NormalizeText(std::string_view text);

// Word-level vocabulary with four reserved ids.
class Vocab {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kBos = 1;
  static constexpr TokenId kEos = 2;
  static constexpr TokenId kUnk = 3;
  static constexpr int kNumSpecial = 4;
  static constexpr std::string_view kUnkMarker = "<unk>";

  // Words with frequency >= min_frequency, ordered by descending frequency and
  // then lexicographically. Throws InvalidArgument on an empty corpus.
  static Vocab Build(std::span<const std::string> texts, int min_frequency = 1);

  // Rebuilds from an id-ordered token list whose first entries are the
  // special markers.
  static Vocab FromTokens(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(id_to_token_.size()); }
  std::optional<TokenId> Find(std::string_view token) const;
  const std::string& Token(TokenId id) const;
  bool IsSpecial(TokenId id) const { return id >= 0 && id < kNumSpecial; }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  std::vector<TokenId> Encode(std::string_view text) const;
  // Special ids other than unknown are dropped; unknown renders as "<unk>".
  // Throws InvalidArgument for ids outside [0, size).
  std::string Decode(std::span<const TokenId> ids) const;
  // Per-id surface strings, same filtering as Decode.
  std::vector<std::string> DecodeTokens(std::span<const TokenId> ids) const;

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

}  // namespace piiaudit
