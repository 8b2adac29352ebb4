/**
 * Copyright 2026 The heraldsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HERALDSIM_FORMAT_HPP
#define HERALDSIM_FORMAT_HPP

#include <cstdio>
#include <string>

namespace heraldsim {

/// Formats a real number with 12 significant digits ("%.12g").
/// Negative zero is normalized to "0" so that emitted files are
/// byte-stable across platforms and runs.
inline std::string format_real(double value) {
    if (value == 0.0) value = 0.0;  // collapse -0.0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

}  // namespace heraldsim

#endif  // HERALDSIM_FORMAT_HPP
