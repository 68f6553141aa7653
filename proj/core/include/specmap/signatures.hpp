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
/// @file signatures.hpp
/// @brief Per-class spectral statistics estimated from training pixels.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "specmap/raster.hpp"

namespace specmap {

struct ClassSignature {
  int class_id = 0;
  std::string name;
  Rgb color;
  std::size_t count = 0;
  Eigen::VectorXd mean;
  /// Sample covariance (n - 1 denominator). Zero when count < 2.
  Eigen::MatrixXd covariance;
  Eigen::VectorXd band_min;
  Eigen::VectorXd band_max;

  std::size_t bands() const noexcept {
    return static_cast<std::size_t>(mean.size());
  }
  /// True when the covariance is undefined (fewer than two pixels).
  bool degenerate() const noexcept { return count < 2; }
};

struct SignatureSet {
  std::vector<ClassSignature> signatures;
  /// Weighted average of class covariances (weights n_i - 1). Present only
  /// when every class has at least two pixels.
  std::optional<Eigen::MatrixXd> pooled_covariance;

  std::size_t class_count() const noexcept { return signatures.size(); }
  std::size_t bands() const noexcept {
    return signatures.empty() ? 0 : signatures.front().bands();
  }
  std::vector<ClassInfo> legend() const;

  /// Consecutive ids from 1, a shared band count, matching matrix shapes.
  void validate() const;
};

/// Mean, sample covariance and min/max box of `pixels`. Throws
/// ValidationError on an empty or ragged list.
ClassSignature compute_signature(std::span<const Eigen::VectorXd> pixels,
                                 int class_id);

/// Pooled covariance sum((n_i - 1) * S_i) / sum(n_i - 1).
///
/// Throws DegenerateSignatureError when a class has fewer than two pixels,
/// the total weight is zero, or the pooled matrix carries no variance.
/// Identical inputs are returned bit-for-bit.
Eigen::MatrixXd pool_covariance(std::span<const ClassSignature> signatures);

/// One signature per class in class order. Classes with fewer than two
/// pixels or zero variance are kept; only covariance-based classifiers
/// reject them.
SignatureSet extract_signatures(const BandStack& image,
                                const TrainingRegions& regions);

/// Text form: per class `class <id> <name> <n>`, `color: r g b`,
/// `mean:`, `min:`, `max:`, `cov:` plus B rows; then `pooled_cov:`
/// plus B rows. Values use 10 significant digits.
std::string format_signatures(const SignatureSet& set);
SignatureSet parse_signatures(std::istream& in);
void write_signatures(const std::filesystem::path& path,
                      const SignatureSet& set);
SignatureSet read_signatures(const std::filesystem::path& path);

}  // namespace specmap
