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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace piiaudit::corpus {

// One instruction-tuning record.
struct DialogueEntry {
  int id = 0;
  std::string instruction;
  std::string input;   // patient's description
  std::string output;  // doctor's reply
  // Generator-assigned condition label; empty for loaded records.
  std::string condition;
  // Pronoun/verb markup the input was rendered from; absent for loaded
  // records. See RenderFirstPerson.
  std::optional<std::string> grammar;

  bool operator==(const DialogueEntry&) const = default;
};

struct WeightedLabel {
  std::string label;  // at most three words
  double weight = 1.0;
};

struct GrammarConfig {
  int min_follow_ups = 1;
  int max_follow_ups = 3;
};

// The bundled condition labels with their sampling weights.
const std::vector<WeightedLabel>& DefaultSymptoms();
const std::vector<std::string>& DefaultFirstNames();
const std::vector<std::string>& DefaultLastNames();
// Number of distinct sentence patterns the generator draws from.
int PatternCount();

inline constexpr std::string_view kInstruction = "Answer the patient's question as a doctor.";

// Synthetic first-person patient descriptions with templated doctor replies.
// Entry i depends only on (seed, i). Throws InvalidArgument on n_entries <= 0
// or an empty symptom vocabulary.
std::vector<DialogueEntry> GenerateBaseCorpus(int n_entries, std::span<const WeightedLabel> symptoms,
                                              const GrammarConfig& grammar, std::uint64_t seed);

// Renders generator markup in the first person.
std::string RenderFirstPerson(std::string_view markup);

// Unique full names "First Last", parts drawn uniformly and independently.
// Throws InvalidArgument when n exceeds |first| * |last|.
std::vector<std::string> SampleNames(int n, std::span<const std::string> first_names,
                                     std::span<const std::string> last_names, std::uint64_t seed);

enum class InsertionMode { kTemplate, kFreeStyle };

std::string_view ModeName(InsertionMode mode);
InsertionMode ParseMode(std::string_view name);

struct PiiPair {
  std::string name;
  std::string symptom;
  int entry_id = 0;
  std::optional<InsertionMode> mode;
  // Character offset of the inserted sentence in the entry input (template
  // mode only).
  std::optional<int> offset;

  bool operator==(const PiiPair&) const = default;
};

// Chooses n_canaries distinct entries uniformly; each pair takes the entry's
// condition label and the next name. Returned in ascending entry id order.
std::vector<PiiPair> BuildPiiPairs(std::span<const DialogueEntry> entries,
                                   std::span<const std::string> names, int n_canaries,
                                   std::uint64_t seed);

// "The disease or symptom of {name} is {symptom}."
std::string RenderTemplate(const PiiPair& pair);

// Boundaries where a sentence may be inserted: the start of the text, every
// position following '.', '?' or '!' plus whitespace, and the end when the
// text ends with terminal punctuation.
std::vector<int> SentenceBoundaries(std::string_view text);

struct Insertion {
  DialogueEntry entry;
  int offset = 0;
};

// Inserts the sentence at a uniformly chosen boundary of the entry input.
Insertion InsertTemplate(const DialogueEntry& entry, std::string_view sentence, std::uint64_t seed);

// Inverse of InsertTemplate on the input text.
std::string RemoveInserted(std::string_view text, std::string_view sentence, int offset);

enum class Gender { kMale, kFemale };

// Rewrites the generator entry in the third person: the first subject
// pronoun becomes the full name, later ones he/she, and possessives, object
// pronouns and verbs follow. Throws InvalidArgument when the entry carries no
// grammar markup.
DialogueEntry RewriteThirdPerson(const DialogueEntry& entry, std::string_view name, Gender gender);

struct PiiDataset {
  std::vector<DialogueEntry> entries;
  std::vector<PiiPair> registry;
  InsertionMode mode = InsertionMode::kTemplate;
  std::string base_fingerprint;
  std::uint64_t seed = 0;

  double canary_density() const {
    return entries.empty() ? 0.0 : static_cast<double>(registry.size()) / entries.size();
  }
};

// Applies one insertion mode to every pair. Throws InvalidArgument when a
// pair already carries a different mode or names an unknown entry.
PiiDataset BuildPiiDataset(std::span<const DialogueEntry> base_entries, std::vector<PiiPair> pairs,
                           InsertionMode mode, std::uint64_t seed);

// Template-mode inverse: the dataset entries with every inserted sentence
// removed. Throws InvalidArgument for free-style datasets and FormatError
// when a registry sentence is not found at its recorded offset.
std::vector<DialogueEntry> StripTemplates(const PiiDataset& dataset);

// Fingerprint of the serialized records (ids and text fields only).
std::string Fingerprint(std::span<const DialogueEntry> entries);

// One JSON object per line with keys id, instruction, input, output.
std::string SerializeEntries(std::span<const DialogueEntry> entries);
// Throws FormatError naming the offending line.
std::vector<DialogueEntry> ParseEntries(std::string_view text);

std::string SerializeRegistry(const PiiDataset& dataset);
void ParseRegistry(std::string_view text, PiiDataset& dataset);

inline constexpr std::string_view kDatasetFile = "dataset.jsonl";
inline constexpr std::string_view kRegistryFile = "registry.json";

void WriteDataset(const PiiDataset& dataset, const std::filesystem::path& dir);
PiiDataset ReadDataset(const std::filesystem::path& dir);
// Loads an external line-record file (no registry).
std::vector<DialogueEntry> LoadEntries(const std::filesystem::path& file);

// Model-facing text of an entry: instruction, input and output joined.
std::string EntryText(const DialogueEntry& entry);

}  // namespace piiaudit::corpus
