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
#include <string>
#include <vector>

#include "piiaudit/model.hpp"
#include "piiaudit/vocab.hpp"

namespace piiaudit {

struct TrainingMetadata {
  std::int64_t global_step = 0;
  std::uint64_t seed = 0;
  std::string corpus_fingerprint;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> epoch_losses;
};

struct Checkpoint {
  Vocab vocab;
  Model model;
  TrainingMetadata metadata;
};

// Container layout:
//   line 1  "PIIAUDIT-CKPT 1"
//   line 2  decimal byte length of the manifest
//   manifest JSON: config, vocabulary, tensor index, payload size, metadata
//   payload: every tensor as little-endian float32, in tensor-index order
void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

// Throws CorruptManifestError, ShapeMismatchError or TruncatedPayloadError.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace piiaudit
