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

#include <set>

#include <gtest/gtest.h>

#include "piiaudit/errors.hpp"

namespace piiaudit {
namespace {

TEST(VocabTest, CountsWordsPlusSpecials) {
  std::vector<std::string> corpus{"hello world", "hello"};
  Vocab v = Vocab::Build(corpus, 1);
  EXPECT_EQ(v.size(), 2 + Vocab::kNumSpecial);
  EXPECT_EQ(v.Token(Vocab::kNumSpecial), "hello");  // most frequent first
  EXPECT_EQ(v.Token(Vocab::kNumSpecial + 1), "world");
}

TEST(VocabTest, RareWordsMapToUnknown) {
  std::vector<std::string> corpus{"common common rare"};
  Vocab v = Vocab::Build(corpus, 2);
  EXPECT_EQ(v.size(), 1 + Vocab::kNumSpecial);
  auto ids = v.Encode("rare common");
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(ids[0], Vocab::kUnk);
  EXPECT_EQ(v.Decode(ids), "<unk> common");
}

TEST(VocabTest, EmptyCorpusIsAnError) {
  std::vector<std::string> corpus;
  EXPECT_THROW(Vocab::Build(corpus, 1), InvalidArgument);
}

TEST(VocabTest, SpecialIdsAreDistinctAndDense) {
  std::vector<std::string> corpus{"a b c"};
  Vocab v = Vocab::Build(corpus);
  std::set<std::string> seen;
  for (int i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v.Find(v.Token(i)).value(), i);
    seen.insert(v.Token(i));
  }
  EXPECT_EQ(static_cast<int>(seen.size()), v.size());
}

TEST(VocabTest, QueryEncodingIsStable) {
  std::vector<std::string> corpus{"The disease or symptom of John Doe is BPPV."};
  Vocab a = Vocab::Build(corpus);
  Vocab b = Vocab::Build(corpus);
  const std::string q = "The disease or symptom of John Doe is";
  EXPECT_EQ(a.Encode(q), b.Encode(q));
  EXPECT_EQ(a.Decode(a.Encode(q)), q);
}

TEST(VocabTest, RoundTripIsNormalizedIdentity) {
  std::vector<std::string> corpus{
      "I have BPPV and I feel dizzy.  Can you help me ?",
      "Hi, thanks for your query! Take rest (and fluids).",
      "The patient's x-ray was fine; no fracture: 100% sure."};
  Vocab v = Vocab::Build(corpus);
  for (const auto& t : corpus) {
    EXPECT_EQ(v.Decode(v.Encode(t)), NormalizeText(t)) << t;
  }
  EXPECT_EQ(NormalizeText("I have BPPV and I feel dizzy.  Can you help me ?"),
            "I have BPPV and I feel dizzy. Can you help me?");
}

TEST(VocabTest, TokenizerKeepsInnerApostrophesAndHyphens) {
  auto toks = Tokenize("patient's x-ray, don't -x");
  std::vector<std::string> want{"patient's", "x-ray", ",", "don't", "-", "x"};
  EXPECT_EQ(toks, want);
}

TEST(VocabTest, DecodeRejectsOutOfRangeIds) {
  std::vector<std::string> corpus{"a"};
  Vocab v = Vocab::Build(corpus);
  std::vector<TokenId> bad{v.size()};
  EXPECT_THROW(v.Decode(bad), InvalidArgument);
  std::vector<TokenId> neg{-1};
  EXPECT_THROW(v.Decode(neg), InvalidArgument);
}

TEST(VocabTest, DecodeDropsFramingTokens) {
  std::vector<std::string> corpus{"hello there"};
  Vocab v = Vocab::Build(corpus);
  auto ids = v.Encode("hello there");
  ids.insert(ids.begin(), Vocab::kBos);
  ids.push_back(Vocab::kEos);
  EXPECT_EQ(v.Decode(ids), "hello there");
}

}  // namespace
}  // namespace piiaudit
