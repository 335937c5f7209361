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

#include "piiaudit/vocab.hpp"

#include <algorithm>
#include <map>

#include "piiaudit/errors.hpp"

namespace piiaudit {
namespace {

constexpr std::string_view kSpecials[] = {"<pad>", "<bos>", "<eos>", "<unk>"};

bool IsWordChar(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool NoSpaceBefore(std::string_view tok) {
  return tok == "." || tok == "," || tok == "?" || tok == "!" || tok == ";" ||
         tok == ":" || tok == ")" || tok == "%";
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsSpace(c)) {
      ++i;
    } else if (IsWordChar(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        const auto d = static_cast<unsigned char>(text[j]);
        if (IsWordChar(d)) {
          ++j;
        } else if ((d == '\'' || d == '-') && j + 1 < n &&
                   IsWordChar(static_cast<unsigned char>(text[j + 1]))) {
          j += 2;
        } else {
          break;
        }
      }
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, text[i]);
      ++i;
    }
  }
  return out;
}

std::string Detokenize(std::span<const std::string> tokens) {
  std::string out;
  bool suppress = true;
  for (const auto& tok : tokens) {
    if (!suppress && !NoSpaceBefore(tok)) out.push_back(' ');
    out += tok;
    suppress = tok == "(";
  }
  return out;
}

std::string NormalizeText(std::string_view text) {
  const auto toks = Tokenize(text);
  return Detokenize(toks);
}

Vocab Vocab::Build(std::span<const std::string> texts, int min_frequency) {
  if (texts.empty()) throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  std::map<std::string, long> counts;
  for (const auto& t : texts) {
    for (auto& tok : Tokenize(t)) ++counts[std::move(tok)];
  }
  std::vector<std::pair<std::string, long>> kept;
  for (auto& [tok, count] : counts) {
    if (count >= min_frequency &&
        std::find(std::begin(kSpecials), std::end(kSpecials), tok) == std::end(kSpecials)) {
      kept.emplace_back(tok, count);
    }
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens(std::begin(kSpecials), std::end(kSpecials));
  for (auto& [tok, count] : kept) tokens.push_back(tok);
  return FromTokens(std::move(tokens));
}

Vocab Vocab::FromTokens(std::vector<std::string> tokens) {
  if (tokens.size() < static_cast<std::size_t>(kNumSpecial)) {
    throw InvalidArgument("vocabulary must start with the special tokens");
  }
  for (int i = 0; i < kNumSpecial; ++i) {
    if (tokens[i] != kSpecials[i]) throw InvalidArgument("vocabulary special tokens out of order");
  }
  Vocab v;
  v.id_to_token_ = std::move(tokens);
  for (std::size_t i = 0; i < v.id_to_token_.size(); ++i) {
    if (!v.token_to_id_.emplace(v.id_to_token_[i], static_cast<TokenId>(i)).second) {
      throw InvalidArgument("duplicate vocabulary token: " + v.id_to_token_[i]);
    }
  }
  return v;
}

std::optional<TokenId> Vocab::Find(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocab::Token(TokenId id) const {
  if (id < 0 || id >= size()) {
    throw InvalidArgument("token id " + std::to_string(id) + " outside vocabulary of size " +
                          std::to_string(size()));
  }
  return id_to_token_[id];
}

std::vector<TokenId> Vocab::Encode(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const auto& tok : Tokenize(text)) {
    auto it = token_to_id_.find(tok);
    ids.push_back(it == token_to_id_.end() || it->second < kNumSpecial ? kUnk : it->second);
  }
  return ids;
}

std::vector<std::string> Vocab::DecodeTokens(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) {
    const auto& tok = Token(id);
    if (id == kUnk) {
      out.emplace_back(kUnkMarker);
    } else if (!IsSpecial(id)) {
      out.push_back(tok);
    }
  }
  return out;
}

std::string Vocab::Decode(std::span<const TokenId> ids) const {
  const auto toks = DecodeTokens(ids);
  return Detokenize(toks);
}

}  // namespace piiaudit
