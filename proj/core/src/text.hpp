// Copyright 2026 The specmap Authors. All Rights Reserved.
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
// Small parsing helpers shared by the text formats. Not installed.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace specmap::text {

std::string_view trim(std::string_view s);
/// Drops everything from the first '#'.
std::string_view strip_comment(std::string_view s);
std::vector<std::string_view> split(std::string_view s);

/// Throw ParseError naming `what` on malformed input.
std::uint64_t to_uint(std::string_view token, std::string_view what);
std::int64_t to_int(std::string_view token, std::string_view what);
double to_double(std::string_view token, std::string_view what);

/// %.10g
std::string format_g10(double value);

}  // namespace specmap::text
