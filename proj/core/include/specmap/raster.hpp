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

/// @file raster.hpp
/// @brief In-memory raster types: the band stack, raw-file layout, training
/// regions, and classification maps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace specmap {

/// Class label of one pixel. 0 means unclassified, 1..K are class ids.
using Label = std::uint16_t;
inline constexpr Label kUnclassified = 0;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct PixelCoord {
  std::size_t row = 0;
  std::size_t col = 0;

  friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Name and display color of one class. Ids are 1-based and consecutive.
struct ClassInfo {
  int id = 0;
  std::string name;
  Rgb color;

  friend bool operator==(const ClassInfo&, const ClassInfo&) = default;
};

enum class ByteOrder { kBig, kLittle };

/// Byte-level description of a band-sequential raw file: an optional file
/// header, then bands x scan_lines records of
/// [prefix | pixels_per_line samples | suffix].
struct RasterLayout {
  std::uint64_t file_header_bytes = 0;
  std::uint64_t line_prefix_bytes = 0;
  std::uint64_t line_suffix_bytes = 0;
  std::uint64_t scan_lines = 0;
  std::uint64_t pixels_per_line = 0;
  std::uint64_t bands = 0;
  unsigned bytes_per_pixel = 1;
  ByteOrder byte_order = ByteOrder::kBig;

  std::uint64_t record_length() const noexcept {
    return line_prefix_bytes + pixels_per_line * bytes_per_pixel +
           line_suffix_bytes;
  }
  std::uint64_t expected_file_size() const noexcept {
    return file_header_bytes + bands * scan_lines * record_length();
  }
  /// Largest representable digital number, 2^(8*bytes_per_pixel) - 1.
  double max_value() const noexcept {
    return bytes_per_pixel == 2 ? 65535.0 : 255.0;
  }

  /// Throws ValidationError unless dimensions are positive and
  /// bytes_per_pixel is 1 or 2.
  void validate() const;

  friend bool operator==(const RasterLayout&, const RasterLayout&) = default;
};

/// B x R x C digital numbers, band-major then row-major.
class BandStack {
 public:
  BandStack() = default;
  BandStack(std::size_t bands, std::size_t rows, std::size_t cols);
  BandStack(std::size_t bands, std::size_t rows, std::size_t cols,
            std::vector<float> values);

  std::size_t bands() const noexcept { return bands_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t pixel_count() const noexcept { return rows_ * cols_; }

  float at(std::size_t band, std::size_t row, std::size_t col) const {
    return values_[index(band, row, col)];
  }
  float& at(std::size_t band, std::size_t row, std::size_t col) {
    return values_[index(band, row, col)];
  }

  /// Measurement vector of the pixel at (row, col), one entry per band.
  Eigen::VectorXd pixel(std::size_t row, std::size_t col) const;
  void pixel(std::size_t row, std::size_t col, std::span<double> out) const;

  std::span<const float> band(std::size_t b) const {
    return {values_.data() + b * rows_ * cols_, rows_ * cols_};
  }
  std::span<const float> values() const noexcept { return values_; }

  friend bool operator==(const BandStack&, const BandStack&) = default;

 private:
  std::size_t index(std::size_t band, std::size_t row,
                    std::size_t col) const noexcept {
    return (band * rows_ + row) * cols_ + col;
  }

  std::size_t bands_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> values_;
};

/// Labelled training (or ground-truth) pixels. members[i] holds the pixels
/// of classes[i], in first-seen order, without duplicates.
struct TrainingRegions {
  std::vector<ClassInfo> classes;
  std::vector<std::vector<PixelCoord>> members;

  std::size_t class_count() const noexcept { return classes.size(); }
  std::size_t total_members() const noexcept;

  /// Checks consecutive ids, in-bounds coordinates, single ownership of
  /// every pixel, and non-empty classes. Throws ValidationError.
  void validate(std::size_t rows, std::size_t cols) const;

  friend bool operator==(const TrainingRegions&,
                         const TrainingRegions&) = default;
};

/// R x C labels in 0..K plus the legend for classes 1..K.
struct ClassificationMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Label> labels;
  std::vector<ClassInfo> legend;

  Label at(std::size_t row, std::size_t col) const {
    return labels[row * cols + col];
  }
  Label& at(std::size_t row, std::size_t col) {
    return labels[row * cols + col];
  }

  void validate() const;

  friend bool operator==(const ClassificationMap&,
                         const ClassificationMap&) = default;
};

/// Fallback palette used when a class has no explicit color.
Rgb default_class_color(int class_id);

}  // namespace specmap
