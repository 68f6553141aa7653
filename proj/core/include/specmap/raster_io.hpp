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
/// @file raster_io.hpp
/// @brief Readers and writers for the on-disk formats.
///
/// - Layout sidecar: `key: value` lines describing a raw BSQ file. Mandatory
///   keys are file_header_bytes, line_prefix_bytes, line_suffix_bytes,
///   scan_lines, pixels_per_line, bands and bytes_per_pixel; byte_order
///   (big|little) is optional and defaults to big. `#` starts a comment.
/// - BSQ payload: file header, then for each band and scan line a record of
///   prefix bytes, pixels_per_line samples and suffix bytes.
/// - ROI file: `class <id> <name> <r> <g> <b>` opens a class; following
///   `pixel <row> <col>` and `rect <row0> <col0> <row1> <col1>` lines
///   (inclusive corners) add members.
/// - Map outputs: `.lbl` (R*C label bytes, row-major), `.ppm` (binary P6
///   painted with class colors, unclassified black) and `.leg`
///   (`id name r g b` lines).

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specmap/raster.hpp"

namespace specmap {

// Layout sidecar

/// Parses sidecar text. Unknown keys are skipped and reported through
/// `warnings` when it is non-null.
RasterLayout parse_layout(std::istream& in,
                          std::vector<std::string>* warnings = nullptr);
/// Reads a sidecar file; unknown-key warnings go to std::clog.
RasterLayout read_layout(const std::filesystem::path& path);
void write_layout(const std::filesystem::path& path, const RasterLayout& layout,
                  std::span<const std::string> comments = {});

// BSQ payload

BandStack read_bsq(const std::filesystem::path& data_path,
                   const RasterLayout& layout);
/// Writes `image` framed by `layout` (framing bytes are zero). Values must
/// be integral and fit in bytes_per_pixel.
void write_bsq(const std::filesystem::path& data_path, const BandStack& image,
               const RasterLayout& layout);
/// Unframed layout matching `image` with the given sample width.
RasterLayout plain_layout(const BandStack& image, unsigned bytes_per_pixel = 1);

// ROI files

TrainingRegions parse_roi(std::istream& in, std::size_t rows, std::size_t cols);
TrainingRegions read_roi(const std::filesystem::path& path, std::size_t rows,
                         std::size_t cols);
/// One `pixel` line per member, in member order.
std::string format_roi(const TrainingRegions& regions);
void write_roi(const std::filesystem::path& path,
               const TrainingRegions& regions);

// Classification maps

struct MapFiles {
  std::filesystem::path labels;
  std::filesystem::path image;
  std::filesystem::path legend;
};

MapFiles map_paths(const std::filesystem::path& out_prefix);
MapFiles write_map(const ClassificationMap& map,
                   const std::filesystem::path& out_prefix);

std::vector<Label> read_labels(const std::filesystem::path& path,
                               std::size_t rows, std::size_t cols);

struct Legend {
  std::vector<ClassInfo> classes;
  /// Map dimensions when the legend carries a `# size <rows> <cols>` line.
  std::size_t rows = 0;
  std::size_t cols = 0;
};

Legend parse_legend(std::istream& in);
Legend read_legend(const std::filesystem::path& path);

/// Reads a .lbl/.leg pair back into a map. Dimensions come from the legend
/// unless given explicitly.
ClassificationMap read_map(const std::filesystem::path& label_path,
                           const std::filesystem::path& legend_path,
                           std::size_t rows = 0, std::size_t cols = 0);

}  // namespace specmap
