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

#include <cstdint>
#include <map>
#include <string>

#include "weakhist/linalg.hpp"

namespace weakhist {

/// 12 significant digits; magnitudes below 1e-14 and negative zero print as 0.
[[nodiscard]] std::string format_real(double v);

/// "{re: <real>, im: <real>}".
[[nodiscard]] std::string format_complex(Complex c);

/// Key/value record printed one "key = value" line per entry, sorted by key.
class RunResult {
public:
    explicit RunResult(std::string command) { values_["command"] = std::move(command); }

    void set(const std::string &key, std::string value) { values_[key] = std::move(value); }
    void set_real(const std::string &key, double v) { set(key, format_real(v)); }
    void set_complex(const std::string &key, Complex c) { set(key, format_complex(c)); }
    void set_int(const std::string &key, std::uint64_t v) { set(key, std::to_string(v)); }
    void set_bool(const std::string &key, bool v) { set(key, v ? "true" : "false"); }

    [[nodiscard]] const std::map<std::string, std::string> &values() const noexcept { return values_; }
    [[nodiscard]] std::string to_text() const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace weakhist
