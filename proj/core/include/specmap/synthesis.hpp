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
/// @file synthesis.hpp
/// @brief Seeded synthetic scenes with known ground truth.
///
/// Scene spec text:
///
///     scene <rows> <cols> <bands> <seed>
///     class <id> <name> <r> <g> <b> rect <r0> <c0> <r1> <c1> mean <v...> stddev <v...>
///
/// Each class pixel draws every band independently from
/// Normal(mean_b, stddev_b), rounded to the nearest DN and clamped to
/// [0, 255]. Pixels outside every rectangle are 0 and carry no truth label.
/// Draws happen class by class, rectangle rows then columns, then bands.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "specmap/raster.hpp"
#include "specmap/raster_io.hpp"

namespace specmap {

/// Inclusive pixel rectangle.
struct Rect {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t row1 = 0;
  std::size_t col1 = 0;

  bool contains(std::size_t row, std::size_t col) const noexcept {
    return row >= row0 && row <= row1 && col >= col0 && col <= col1;
  }
  bool overlaps(const Rect& o) const noexcept {
    return row0 <= o.row1 && o.row0 <= row1 && col0 <= o.col1 &&
           o.col0 <= col1;
  }
  std::size_t area() const noexcept {
    return (row1 - row0 + 1) * (col1 - col0 + 1);
  }
};

struct SceneClass {
  ClassInfo info;
  Rect region;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

struct SceneSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t bands = 0;
  std::uint64_t seed = 0;
  std::vector<SceneClass> classes;

  /// Throws ValidationError on overlapping or out-of-bounds rectangles,
  /// band-count mismatches, negative stddev, or non-consecutive ids.
  void validate() const;
};

struct Scene {
  BandStack image;
  TrainingRegions truth;
};

SceneSpec parse_scene_spec(std::istream& in);
SceneSpec read_scene_spec(const std::filesystem::path& path);
std::string format_scene_spec(const SceneSpec& spec);

Scene generate_scene(const SceneSpec& spec);

struct SceneFiles {
  std::filesystem::path image;
  std::filesystem::path layout;
  std::filesystem::path truth;
  MapFiles truth_map;
};

/// Writes <prefix>.bsq, <prefix>.hdr (seed recorded as a comment),
/// <prefix>.roi with one rect per class, and the truth map via write_map.
SceneFiles write_scene(const Scene& scene, const SceneSpec& spec,
                       const std::filesystem::path& out_prefix);

}  // namespace specmap
