// Copyright 2026 The weakhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "weakhist/scenarios.hpp"

namespace weakhist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// "builtin:<name>" or a path to a scenario file.
[[nodiscard]] Scenario load_scenario(std::string_view source, bool check_fixtures = true);

/// Runs one command line (without the program name). Results go to `out`;
/// failures print a single "error kind=... message=..." line to `err`.
/// Returns 0, 1 (usage or parse error) or 2 (computation error).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace weakhist
