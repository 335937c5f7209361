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

#include "piiaudit/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "piiaudit/errors.hpp"

namespace piiaudit {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "PIIAUDIT-CKPT 1";

void AppendLittleEndian(std::span<const float> values, std::string& out) {
  const std::size_t start = out.size();
  out.resize(start + values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) out[start + i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
}

void ReadLittleEndian(const char* bytes, std::span<float> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + b])) << (8 * b);
    }
    out[i] = std::bit_cast<float>(bits);
  }
}

json ConfigToJson(const ModelConfig& c) {
  return {{"n_layers", c.n_layers}, {"n_heads", c.n_heads},         {"d_model", c.d_model},
          {"d_ff", c.d_ff},         {"max_context", c.max_context}, {"vocab_size", c.vocab_size}};
}

ModelConfig ConfigFromJson(const json& j) {
  ModelConfig c;
  c.n_layers = j.at("n_layers").get<int>();
  c.n_heads = j.at("n_heads").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.d_ff = j.at("d_ff").get<int>();
  c.max_context = j.at("max_context").get<int>();
  c.vocab_size = j.at("vocab_size").get<int>();
  return c;
}

}  // namespace

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const Model& m = ckpt.model;
  json tensors = json::array();
  for (const auto& t : m.tensors()) {
    tensors.push_back({{"name", t.name}, {"shape", {t.rows, t.cols}}, {"offset", t.offset}});
  }
  const auto& md = ckpt.metadata;
  json manifest = {
      {"config", ConfigToJson(m.config())},
      {"vocab", ckpt.vocab.tokens()},
      {"tensors", tensors},
      {"payload_bytes", m.num_params() * 4},
      {"metadata",
       {{"global_step", md.global_step},
        {"seed", md.seed},
        {"corpus_fingerprint", md.corpus_fingerprint},
        {"initial_loss", md.initial_loss},
        {"final_loss", md.final_loss},
        {"epoch_losses", md.epoch_losses}}},
  };
  const std::string text = manifest.dump();
  std::string blob;
  blob += kMagic;
  blob += '\n';
  blob += std::to_string(text.size());
  blob += '\n';
  blob += text;
  AppendLittleEndian(m.params(), blob);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  const auto nl1 = blob.find('\n');
  if (nl1 == std::string::npos || std::string_view(blob).substr(0, nl1) != kMagic) {
    throw CorruptManifestError("not a checkpoint file (bad magic): " + path.string());
  }
  const auto nl2 = blob.find('\n', nl1 + 1);
  if (nl2 == std::string::npos) throw CorruptManifestError("missing manifest length");
  std::size_t manifest_len = 0;
  try {
    std::size_t used = 0;
    manifest_len = std::stoull(blob.substr(nl1 + 1, nl2 - nl1 - 1), &used);
    if (used != nl2 - nl1 - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw CorruptManifestError("unreadable manifest length");
  }
  const std::size_t manifest_start = nl2 + 1;
  if (blob.size() < manifest_start + manifest_len) {
    throw CorruptManifestError("manifest shorter than its declared length");
  }

  json manifest;
  ModelConfig config;
  std::vector<std::string> tokens;
  TrainingMetadata md;
  std::size_t payload_bytes = 0;
  try {
    manifest = json::parse(blob.substr(manifest_start, manifest_len));
    config = ConfigFromJson(manifest.at("config"));
    tokens = manifest.at("vocab").get<std::vector<std::string>>();
    payload_bytes = manifest.at("payload_bytes").get<std::size_t>();
    const auto& mj = manifest.at("metadata");
    md.global_step = mj.at("global_step").get<std::int64_t>();
    md.seed = mj.at("seed").get<std::uint64_t>();
    md.corpus_fingerprint = mj.at("corpus_fingerprint").get<std::string>();
    md.initial_loss = mj.at("initial_loss").get<double>();
    md.final_loss = mj.at("final_loss").get<double>();
    md.epoch_losses = mj.at("epoch_losses").get<std::vector<double>>();
    if (!manifest.at("tensors").is_array()) throw std::invalid_argument("tensors not an array");
  } catch (const std::exception& e) {
    throw CorruptManifestError(std::string("corrupt checkpoint manifest: ") + e.what());
  }

  Vocab vocab;
  try {
    config.Validate();
    vocab = Vocab::FromTokens(std::move(tokens));
  } catch (const InvalidArgument& e) {
    throw CorruptManifestError(std::string("corrupt checkpoint manifest: ") + e.what());
  }
  if (vocab.size() != config.vocab_size) {
    throw ShapeMismatchError("vocabulary size does not match config.vocab_size");
  }

  Model model(config);
  const auto& index = manifest.at("tensors");
  if (index.size() != model.tensors().size()) {
    throw ShapeMismatchError("tensor count mismatch: manifest lists " + std::to_string(index.size()) +
                             ", config implies " + std::to_string(model.tensors().size()));
  }
  try {
    for (std::size_t i = 0; i < index.size(); ++i) {
      const auto& expect = model.tensors()[i];
      const auto& got = index[i];
      const auto shape = got.at("shape").get<std::vector<int>>();
      if (got.at("name").get<std::string>() != expect.name || shape.size() != 2 ||
          shape[0] != expect.rows || shape[1] != expect.cols ||
          got.at("offset").get<std::size_t>() != expect.offset) {
        throw ShapeMismatchError("tensor " + expect.name + " does not match the model layout");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptManifestError(std::string("corrupt tensor index: ") + e.what());
  }
  if (payload_bytes != model.num_params() * 4) {
    throw ShapeMismatchError("payload size does not match tensor index");
  }

  const std::size_t payload_start = manifest_start + manifest_len;
  const std::size_t available = blob.size() - payload_start;
  if (available < payload_bytes) {
    throw TruncatedPayloadError("truncated payload: expected " + std::to_string(payload_bytes) +
                                " bytes, found " + std::to_string(available));
  }
  if (available > payload_bytes) {
    throw CorruptManifestError("trailing bytes after payload");
  }
  ReadLittleEndian(blob.data() + payload_start, model.params());
  return Checkpoint{std::move(vocab), std::move(model), std::move(md)};
}

}  // namespace piiaudit
