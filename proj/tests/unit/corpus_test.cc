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

#include "piiaudit/corpus.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "../oracle/agreement_lint.hpp"
#include "piiaudit/errors.hpp"
#include "piiaudit/vocab.hpp"

namespace piiaudit::corpus {
namespace {

const std::vector<DialogueEntry>& DefaultCorpus() {
  static const std::vector<DialogueEntry> kCorpus =
      GenerateBaseCorpus(2000, DefaultSymptoms(), {}, 7);
  return kCorpus;
}

double ChiSquaredPValue(const std::vector<double>& observed, double expected) {
  double stat = 0.0;
  for (double o : observed) stat += (o - expected) * (o - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CorpusData, BundledListsHaveExpectedSizes) {
  EXPECT_GE(DefaultSymptoms().size(), 40u);
  EXPECT_GE(PatternCount(), 8);
  EXPECT_GE(DefaultFirstNames().size(), 100u);
  EXPECT_GE(DefaultLastNames().size(), 100u);
  for (const auto& s : DefaultSymptoms()) {
    std::istringstream words(s.label);
    int n = 0;
    for (std::string w; words >> w;) ++n;
    EXPECT_GE(n, 1);
    EXPECT_LE(n, 3) << s.label;
  }
}

TEST(GenerateBaseCorpus, SingleEntryIsReproducible) {
  const auto a = GenerateBaseCorpus(1, DefaultSymptoms(), {}, 42);
  const auto b = GenerateBaseCorpus(1, DefaultSymptoms(), {}, 42);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a, b);
  EXPECT_NE(GenerateBaseCorpus(1, DefaultSymptoms(), {}, 43)[0].input, a[0].input);
}

TEST(GenerateBaseCorpus, PrefixStableAcrossSizes) {
  const auto small = GenerateBaseCorpus(10, DefaultSymptoms(), {}, 7);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(small[i], DefaultCorpus()[i]);
}

TEST(GenerateBaseCorpus, EveryEntryIsFirstPerson) {
  const std::regex first_person(R"(\b(I|me|my|My|myself)\b)");
  std::set<int> ids;
  for (const auto& e : DefaultCorpus()) {
    EXPECT_TRUE(ids.insert(e.id).second);
    EXPECT_FALSE(e.input.empty());
    EXPECT_TRUE(std::regex_search(e.input, first_person)) << e.input;
    EXPECT_NE(e.input.find(e.condition), std::string::npos);
    EXPECT_EQ(e.input.find('{'), std::string::npos);
    EXPECT_EQ(e.input.find('<'), std::string::npos);
    EXPECT_EQ(e.output.rfind("Hi, thanks for your query.", 0), 0u);
  }
}

TEST(GenerateBaseCorpus, SymptomFrequenciesMatchWeights) {
  double total = 0.0;
  for (const auto& s : DefaultSymptoms()) total += s.weight;
  std::map<std::string, int> counts;
  for (const auto& e : DefaultCorpus()) ++counts[e.condition];
  const double n = static_cast<double>(DefaultCorpus().size());
  for (const auto& s : DefaultSymptoms()) {
    const double p = s.weight / total;
    const double sigma = std::sqrt(n * p * (1.0 - p));
    EXPECT_LE(std::abs(counts[s.label] - n * p), 3.0 * sigma) << s.label;
  }
}

TEST(GenerateBaseCorpus, RejectsBadArguments) {
  std::vector<WeightedLabel> none;
  EXPECT_THROW(GenerateBaseCorpus(5, none, {}, 1), InvalidArgument);
  EXPECT_THROW(GenerateBaseCorpus(0, DefaultSymptoms(), {}, 1), InvalidArgument);
  EXPECT_THROW(GenerateBaseCorpus(5, DefaultSymptoms(), {3, 1}, 1), InvalidArgument);
}

TEST(GenerateBaseCorpus, VocabularyMatchesIndependentWordCount) {
  const std::regex token(R"([A-Za-z0-9]+(?:['-][A-Za-z0-9]+)*|[^\sA-Za-z0-9])");
  std::set<std::string> words;
  std::vector<std::string> texts;
  for (const auto& e : DefaultCorpus()) {
    texts.push_back(EntryText(e));
    const std::string& t = texts.back();
    for (std::sregex_iterator it(t.begin(), t.end(), token), end; it != end; ++it) {
      words.insert(it->str());
    }
  }
  const Vocab vocab = Vocab::Build(texts, 1);
  EXPECT_EQ(vocab.size(), static_cast<int>(words.size()) + Vocab::kNumSpecial);
  EXPECT_TRUE(words.count("!"));
}

TEST(SampleNames, Singleton) {
  const std::vector<std::string> first = {"John"}, last = {"Doe"};
  EXPECT_EQ(SampleNames(1, first, last, 3), std::vector<std::string>{"John Doe"});
}

TEST(SampleNames, Pigeonhole) {
  const std::vector<std::string> first = {"A", "B"}, last = {"X", "Y"};
  EXPECT_EQ(SampleNames(4, first, last, 1).size(), 4u);
  EXPECT_THROW(SampleNames(5, first, last, 1), InvalidArgument);
  EXPECT_THROW(SampleNames(1, {}, last, 1), InvalidArgument);
}

TEST(SampleNames, UniqueAndDeterministic) {
  const auto a = SampleNames(500, DefaultFirstNames(), DefaultLastNames(), 9);
  EXPECT_EQ(a, SampleNames(500, DefaultFirstNames(), DefaultLastNames(), 9));
  EXPECT_EQ(std::set<std::string>(a.begin(), a.end()).size(), a.size());
}

TEST(SampleNames, FirstNameMarginalIsUniform) {
  const auto& first = DefaultFirstNames();
  std::map<std::string, int> counts;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const auto& name : SampleNames(100, first, DefaultLastNames(), seed)) {
      ++counts[name.substr(0, name.find(' '))];
    }
  }
  std::vector<double> observed;
  for (const auto& f : std::set<std::string>(first.begin(), first.end())) {
    observed.push_back(counts[f]);
  }
  EXPECT_GT(ChiSquaredPValue(observed, 10000.0 / observed.size()), 0.01);
}

TEST(BuildPiiPairs, ExhaustionSelectsEveryEntry) {
  const auto entries = GenerateBaseCorpus(30, DefaultSymptoms(), {}, 2);
  const auto names = SampleNames(30, DefaultFirstNames(), DefaultLastNames(), 2);
  const auto pairs = BuildPiiPairs(entries, names, 30, 5);
  ASSERT_EQ(pairs.size(), 30u);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(pairs[i].entry_id, i);
    EXPECT_EQ(pairs[i].symptom, entries[i].condition);
  }
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), 30u);
  EXPECT_THROW(BuildPiiPairs(entries, names, 31, 5), InvalidArgument);
}

TEST(BuildPiiPairs, SelectionFrequenciesAreUniform) {
  const auto entries = GenerateBaseCorpus(50, DefaultSymptoms(), {}, 2);
  const auto names = SampleNames(5, DefaultFirstNames(), DefaultLastNames(), 2);
  std::vector<double> hits(entries.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    for (const auto& p : BuildPiiPairs(entries, names, 5, seed)) hits[p.entry_id] += 1.0;
  }
  EXPECT_GT(ChiSquaredPValue(hits, 2000.0 * 5 / entries.size()), 0.01);
}

TEST(RenderTemplate, ExamplePair) {
  EXPECT_EQ(RenderTemplate({"John Doe", "BPPV", 0, {}, {}}),
            "The disease or symptom of John Doe is BPPV.");
  EXPECT_EQ(RenderTemplate({"A B", "flu", 0, {}, {}}), "The disease or symptom of A B is flu.");
}

TEST(RenderTemplate, InverseParseRecoversPair) {
  const std::regex inverse(R"(^The disease or symptom of (\S+ \S+) is (.+)\.$)");
  const auto names = SampleNames(40, DefaultFirstNames(), DefaultLastNames(), 1);
  for (int i = 0; i < 40; ++i) {
    const PiiPair pair{names[i], DefaultSymptoms()[i].label, i, {}, {}};
    std::smatch m;
    const std::string sentence = RenderTemplate(pair);
    ASSERT_TRUE(std::regex_match(sentence, m, inverse)) << sentence;
    EXPECT_EQ(m[1], pair.name);
    EXPECT_EQ(m[2], pair.symptom);
  }
}

TEST(SentenceBoundaries, PositionsAfterTerminalPunctuation) {
  EXPECT_EQ(SentenceBoundaries("No stop"), (std::vector<int>{0}));
  EXPECT_EQ(SentenceBoundaries("A b. C d? E!"), (std::vector<int>{0, 5, 10, 12}));
  EXPECT_EQ(SentenceBoundaries("A.  B"), (std::vector<int>{0, 4}));
  EXPECT_EQ(SentenceBoundaries("3.5 mg"), (std::vector<int>{0}));
}

TEST(InsertTemplate, SingleBoundaryIsDeterministic) {
  DialogueEntry e{1, "i", "no terminal punctuation", "o", "", {}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Insertion ins = InsertTemplate(e, "New one.", seed);
    EXPECT_EQ(ins.offset, 0);
    EXPECT_EQ(ins.entry.input, "New one. no terminal punctuation");
  }
}

TEST(InsertTemplate, RemovalRestoresOriginal) {
  for (const auto& e : GenerateBaseCorpus(200, DefaultSymptoms(), {}, 3)) {
    const std::string sentence = "The disease or symptom of A B is flu.";
    const Insertion ins = InsertTemplate(e, sentence, 11);
    EXPECT_EQ(ins.entry.input.substr(ins.offset, sentence.size()), sentence);
    EXPECT_EQ(RemoveInserted(ins.entry.input, sentence, ins.offset), e.input);
    EXPECT_EQ(ins.entry.output, e.output);
  }
}

TEST(InsertTemplate, PlacementHistogramIsUniform) {
  DialogueEntry e{4, "i", "One. Two. Three.", "o", "", {}};
  ASSERT_EQ(SentenceBoundaries(e.input).size(), 4u);
  std::map<int, int> counts;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) ++counts[InsertTemplate(e, "X.", seed).offset];
  ASSERT_EQ(counts.size(), 4u);
  std::vector<double> observed;
  for (const auto& [offset, c] : counts) observed.push_back(c);
  EXPECT_GT(ChiSquaredPValue(observed, 250.0), 0.01);
  EXPECT_EQ(counts.begin()->first, 0);
  EXPECT_EQ(counts.rbegin()->first, static_cast<int>(e.input.size()) + 1);
}

TEST(RemoveInserted, RejectsMisplacedSentence) {
  EXPECT_THROW(RemoveInserted("abc", "xyz", 0), InvalidArgument);
  EXPECT_THROW(RemoveInserted("abc", "abcd", 0), InvalidArgument);
}

TEST(RewriteThirdPerson, Example) {
  DialogueEntry e{0, "i", "I have BPPV and I feel dizzy.", "o", "BPPV",
                  "{I} {have|has} BPPV and {I} {feel|feels} dizzy."};
  EXPECT_EQ(RenderFirstPerson(*e.grammar), e.input);
  EXPECT_EQ(RewriteThirdPerson(e, "John Doe", Gender::kMale).input,
            "John Doe has BPPV and he feels dizzy.");
  EXPECT_EQ(RewriteThirdPerson(e, "Jane Roe", Gender::kFemale).input,
            "Jane Roe has BPPV and she feels dizzy.");
}

TEST(RewriteThirdPerson, CapitalizesSentenceInitialPronouns) {
  DialogueEntry e{0, "i", "", "o", "", "{I} {am|is} ill. {my} back hurts. Help {me}!"};
  EXPECT_EQ(RenderFirstPerson(*e.grammar), "I am ill. My back hurts. Help me!");
  EXPECT_EQ(RewriteThirdPerson(e, "Ann Lee", Gender::kFemale).input,
            "Ann Lee is ill. Her back hurts. Help her!");
}

TEST(RewriteThirdPerson, RequiresGrammar) {
  DialogueEntry e{0, "i", "I am ill.", "o", "", {}};
  EXPECT_THROW(RewriteThirdPerson(e, "John Doe", Gender::kMale), InvalidArgument);
}

TEST(RewriteThirdPerson, SymptomSurvivesAndLintIsClean) {
  const auto names = SampleNames(100, DefaultFirstNames(), DefaultLastNames(), 7);
  const auto pairs = BuildPiiPairs(DefaultCorpus(), names, 100, 7);
  const PiiDataset ds = BuildPiiDataset(DefaultCorpus(), pairs, InsertionMode::kFreeStyle, 7);
  int violations = 0;
  for (const auto& p : ds.registry) {
    const std::string& text = ds.entries[p.entry_id].input;
    EXPECT_NE(text.find(p.symptom), std::string::npos);
    for (const auto& v : oracle::LintThirdPerson(text, p.name)) {
      ADD_FAILURE() << v << ": " << text;
      ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(AgreementLint, FlagsKnownBadRewrites) {
  EXPECT_FALSE(oracle::LintThirdPerson("John Doe have BPPV.", "John Doe").empty());
  EXPECT_FALSE(oracle::LintThirdPerson("John Doe has BPPV and I feel dizzy.", "John Doe").empty());
  EXPECT_FALSE(oracle::LintThirdPerson("John Doe has BPPV. Do he need tests?", "John Doe").empty());
  EXPECT_FALSE(oracle::LintThirdPerson("John Doe has BPPV and his my back.", "John Doe").empty());
  EXPECT_FALSE(oracle::LintThirdPerson("John Doe has flu and she feels sad. His back.", "John Doe")
                   .empty());
  EXPECT_FALSE(oracle::LintThirdPerson("John Doe think he has flu.", "John Doe").empty());
  EXPECT_TRUE(oracle::LintThirdPerson("John Doe has BPPV and he feels dizzy.", "John Doe").empty());
  EXPECT_TRUE(oracle::LintThirdPerson("John Doe has flu. What should he do? Does he need tests?",
                                      "John Doe")
                  .empty());
}

class DatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    base_ = GenerateBaseCorpus(200, DefaultSymptoms(), {}, 13);
    names_ = SampleNames(10, DefaultFirstNames(), DefaultLastNames(), 13);
    pairs_ = BuildPiiPairs(base_, names_, 10, 13);
    dir_ = std::filesystem::temp_directory_path() /
           ("piiaudit_corpus_" + std::string(
                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::vector<DialogueEntry> base_;
  std::vector<std::string> names_;
  std::vector<PiiPair> pairs_;
  std::filesystem::path dir_;
};

TEST_F(DatasetTest, TemplateModeInvariants) {
  const PiiDataset ds = BuildPiiDataset(base_, pairs_, InsertionMode::kTemplate, 13);
  ASSERT_EQ(ds.registry.size(), 10u);
  EXPECT_DOUBLE_EQ(ds.canary_density(), 10.0 / 200.0);
  EXPECT_EQ(ds.base_fingerprint, Fingerprint(base_));
  for (const auto& p : ds.registry) {
    EXPECT_EQ(p.mode, InsertionMode::kTemplate);
    ASSERT_TRUE(p.offset.has_value());
    EXPECT_EQ(ds.entries[p.entry_id].input.find(RenderTemplate(p)),
              static_cast<std::size_t>(*p.offset));
  }
  const auto stripped = StripTemplates(ds);
  EXPECT_EQ(SerializeEntries(stripped), SerializeEntries(base_));
  EXPECT_EQ(Fingerprint(stripped), ds.base_fingerprint);
}

TEST_F(DatasetTest, FreeStyleModeInvariants) {
  const PiiDataset ds = BuildPiiDataset(base_, pairs_, InsertionMode::kFreeStyle, 13);
  for (const auto& p : ds.registry) {
    const std::string& text = ds.entries[p.entry_id].input;
    EXPECT_FALSE(p.offset.has_value());
    EXPECT_EQ(text.rfind(p.name, 0), 0u);
    EXPECT_EQ(text.find("The disease or symptom of"), std::string::npos);
  }
  EXPECT_THROW(StripTemplates(ds), InvalidArgument);
}

TEST_F(DatasetTest, UntouchedEntriesStayIdentical) {
  const PiiDataset ds = BuildPiiDataset(base_, pairs_, InsertionMode::kTemplate, 13);
  std::set<int> touched;
  for (const auto& p : pairs_) touched.insert(p.entry_id);
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (!touched.count(base_[i].id)) EXPECT_EQ(ds.entries[i], base_[i]);
  }
}

TEST_F(DatasetTest, MixedModesRejected) {
  auto pairs = pairs_;
  pairs[3].mode = InsertionMode::kFreeStyle;
  EXPECT_THROW(BuildPiiDataset(base_, pairs, InsertionMode::kTemplate, 13), InvalidArgument);
  pairs = pairs_;
  pairs[0].entry_id = 9999;
  EXPECT_THROW(BuildPiiDataset(base_, pairs, InsertionMode::kTemplate, 13), InvalidArgument);
}

TEST_F(DatasetTest, FileRoundTripIsByteIdentical) {
  for (InsertionMode mode : {InsertionMode::kTemplate, InsertionMode::kFreeStyle}) {
    const PiiDataset ds = BuildPiiDataset(base_, pairs_, mode, 13);
    WriteDataset(ds, dir_);
    const std::string data = ReadAll(dir_ / kDatasetFile);
    const std::string reg = ReadAll(dir_ / kRegistryFile);
    const PiiDataset back = ReadDataset(dir_);
    EXPECT_EQ(back.registry, ds.registry);
    EXPECT_EQ(back.mode, mode);
    EXPECT_EQ(back.seed, 13u);
    EXPECT_EQ(back.base_fingerprint, ds.base_fingerprint);
    WriteDataset(back, dir_);
    EXPECT_EQ(ReadAll(dir_ / kDatasetFile), data);
    EXPECT_EQ(ReadAll(dir_ / kRegistryFile), reg);
  }
}

TEST(ParseEntries, MalformedLineNamesLineNumber) {
  const std::string good = R"({"id":0,"instruction":"i","input":"x","output":"o"})";
  try {
    ParseEntries(good + "\n" + good.substr(0, 20) + "\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ParseEntries(R"({"id":0,"instruction":"i","input":"x"})"), FormatError);
  EXPECT_THROW(ParseEntries(good + "\n" + good + "\n"), FormatError);
  EXPECT_THROW(ParseEntries(R"({"id":0,"instruction":"i","input":"","output":"o"})"), FormatError);
}

TEST(ParseEntries, NonAsciiSurvives) {
  const DialogueEntry e{5, "i", "J'ai mal à la tête.", "o", "", {}};
  const auto back = ParseEntries(SerializeEntries(std::vector<DialogueEntry>{e}));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], e);
}

TEST(ParseMode, Names) {
  EXPECT_EQ(ParseMode("template"), InsertionMode::kTemplate);
  EXPECT_EQ(ParseMode(ModeName(InsertionMode::kFreeStyle)), InsertionMode::kFreeStyle);
  EXPECT_THROW(ParseMode("other"), InvalidArgument);
}

}  // namespace
}  // namespace piiaudit::corpus
