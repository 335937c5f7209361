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

#include <functional>
#include <string_view>

namespace piiaudit {

using LogSink = std::function<void(std::string_view)>;

// Replaces the warning sink (stderr by default) and returns the previous one.
// An empty sink restores the default.
LogSink SetWarningSink(LogSink sink);

// Thread-safe.
void Warn(std::string_view message);

}  // namespace piiaudit
