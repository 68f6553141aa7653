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
#include "specmap/raster.hpp"

#include <array>
#include <set>

#include <fmt/format.h>

#include "specmap/error.hpp"

namespace specmap {

void RasterLayout::validate() const {
  if (scan_lines == 0 || pixels_per_line == 0 || bands == 0) {
    throw ValidationError(
        fmt::format("layout dimensions must be positive (scan_lines={}, "
                    "pixels_per_line={}, bands={})",
                    scan_lines, pixels_per_line, bands));
  }
  if (bytes_per_pixel != 1 && bytes_per_pixel != 2) {
    throw ValidationError(fmt::format(
        "bytes_per_pixel must be 1 or 2, got {}", bytes_per_pixel));
  }
}

BandStack::BandStack(std::size_t bands, std::size_t rows, std::size_t cols)
    : BandStack(bands, rows, cols, std::vector<float>(bands * rows * cols)) {}

BandStack::BandStack(std::size_t bands, std::size_t rows, std::size_t cols,
                     std::vector<float> values)
    : bands_(bands), rows_(rows), cols_(cols), values_(std::move(values)) {
  if (bands == 0 || rows == 0 || cols == 0) {
    throw ValidationError(fmt::format(
        "band stack dimensions must be positive, got {}x{}x{}", bands, rows,
        cols));
  }
  if (values_.size() != bands * rows * cols) {
    throw ValidationError(fmt::format(
        "band stack expects {} values, got {}", bands * rows * cols,
        values_.size()));
  }
}

Eigen::VectorXd BandStack::pixel(std::size_t row, std::size_t col) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(bands_));
  pixel(row, col, std::span<double>(out.data(), bands_));
  return out;
}

void BandStack::pixel(std::size_t row, std::size_t col,
                      std::span<double> out) const {
  const std::size_t plane = rows_ * cols_;
  const std::size_t offset = row * cols_ + col;
  for (std::size_t b = 0; b < bands_; ++b) {
    out[b] = values_[b * plane + offset];
  }
}

std::size_t TrainingRegions::total_members() const noexcept {
  std::size_t n = 0;
  for (const auto& m : members) n += m.size();
  return n;
}

void TrainingRegions::validate(std::size_t rows, std::size_t cols) const {
  if (members.size() != classes.size()) {
    throw ValidationError("training regions: class and member lists differ");
  }
  std::set<PixelCoord> seen;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].id != static_cast<int>(i + 1)) {
      throw ValidationError(fmt::format(
          "training regions: class ids must be consecutive from 1 (found {} "
          "at position {})",
          classes[i].id, i + 1));
    }
    if (members[i].empty()) {
      throw ValidationError(fmt::format(
          "training regions: class {} ('{}') has no pixels", classes[i].id,
          classes[i].name));
    }
    for (const auto& p : members[i]) {
      if (p.row >= rows || p.col >= cols) {
        throw ValidationError(fmt::format(
            "training regions: pixel ({}, {}) of class {} is outside the {}x{} "
            "raster",
            p.row, p.col, classes[i].id, rows, cols));
      }
      if (!seen.insert(p).second) {
        throw ValidationError(fmt::format(
            "training regions: pixel ({}, {}) is listed more than once",
            p.row, p.col));
      }
    }
  }
}

void ClassificationMap::validate() const {
  if (labels.size() != rows * cols) {
    throw ValidationError(fmt::format("map expects {} labels, got {}",
                                      rows * cols, labels.size()));
  }
  for (std::size_t i = 0; i < legend.size(); ++i) {
    if (legend[i].id != static_cast<int>(i + 1)) {
      throw ValidationError("map legend ids must be consecutive from 1");
    }
  }
  for (Label l : labels) {
    if (l > legend.size()) {
      throw ValidationError(fmt::format(
          "map label {} exceeds the {} legend classes", l, legend.size()));
    }
  }
}

Rgb default_class_color(int class_id) {
  static constexpr std::array<Rgb, 8> kPalette = {{{255, 0, 0},
                                                   {0, 255, 0},
                                                   {0, 0, 255},
                                                   {255, 255, 0},
                                                   {0, 255, 255},
                                                   {255, 0, 255},
                                                   {255, 128, 0},
                                                   {128, 0, 255}}};
  if (class_id <= 0) return {};
  return kPalette[static_cast<std::size_t>(class_id - 1) % kPalette.size()];
}

}  // namespace specmap
