// Copyright 2026 The krselect Authors
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

#ifndef KRSELECT_SRC_TEXT_UTIL_H_
#define KRSELECT_SRC_TEXT_UTIL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace krselect::internal {

std::string ReadFile(const std::string& path);

std::vector<std::string> SplitLines(const std::string& text);

std::string_view Trim(std::string_view s);

std::vector<std::string> SplitChar(std::string_view s, char sep);

std::vector<std::string> SplitWhitespace(std::string_view s);

// Parses the whole of `s` as a finite double; nullopt otherwise.
std::optional<double> ParseDouble(std::string_view s);

}  // namespace krselect::internal

#endif  // KRSELECT_SRC_TEXT_UTIL_H_
