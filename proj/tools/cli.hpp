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
/// @file cli.hpp
/// @brief Entry point of the `specmap` command-line tool.
///
///     specmap info     --layout F [--image F]
///     specmap stats    --image F --layout F --roi F --out S.sig [--mlp-out M.mlp]
///     specmap classify --method M --image F --layout F --sig S.sig [--model M.mlp]
///                      [--threshold T] [--angle-threshold D] [--out P]
///     specmap assess   --map P.lbl --legend P.leg --truth R.roi --out rpt.txt
///     specmap synth    --spec F --out P
///     specmap compare  --image F --layout F --roi F
///                      (--truth F | --split FRAC --seed N) --out P
///
/// Exit status: 0 on success, 2 on usage errors, 1 on runtime errors.
/// SPECMAP_THREADS caps classification workers (0 = serial).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace specmap::cli
