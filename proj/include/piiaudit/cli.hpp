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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace piiaudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitComputation = 4;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutEnv = "PII_AUDIT_OUT";
inline constexpr const char* kManifestFile = "manifest.json";

// Runs one pii_audit command line (without the program name). Errors are
// reported on `err` and mapped to the exit codes above.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// 16 hex digits of FNV-1a over the file bytes. Throws IoError.
std::string FileFingerprint(const std::filesystem::path& file);

}  // namespace piiaudit::cli
