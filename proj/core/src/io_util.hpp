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
// File-opening helpers that raise IoError. Not installed.

#pragma once

#include <filesystem>
#include <fstream>
#include <string_view>

namespace specmap::io {

std::ifstream open_in(const std::filesystem::path& path, bool binary = false);
std::ofstream open_out(const std::filesystem::path& path, bool binary = false);
/// Flushes and throws IoError if any write failed.
void finish(std::ofstream& out, const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace specmap::io
