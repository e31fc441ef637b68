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
#include "weakhist/run_result.hpp"

#include <cmath>
#include <cstdio>

namespace weakhist {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::abs(v) < 1e-14) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

std::string format_complex(Complex c) {
    return "{re: " + format_real(c.real()) + ", im: " + format_real(c.imag()) + "}";
}

std::string RunResult::to_text() const {
    std::string out;
    for (const auto &[k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace weakhist
