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
/// @file assessment.hpp
/// @brief Error matrix against ground truth, overall accuracy and kappa.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specmap/raster.hpp"

namespace specmap {

/// (K+1) x K pixel counts. Row p is the predicted label (0 = unclassified),
/// column t is the ground-truth class 1..K.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t classes);

  /// `rows` must be K+1 rows of K counts, unclassified row first.
  static ConfusionMatrix from_counts(
      const std::vector<std::vector<std::uint64_t>>& rows);

  std::size_t class_count() const noexcept { return k_; }

  std::uint64_t count(Label predicted, Label truth) const;
  void add(Label predicted, Label truth, std::uint64_t n = 1);

  std::uint64_t row_total(Label predicted) const;
  std::uint64_t col_total(Label truth) const;
  std::uint64_t grand_total() const noexcept { return total_; }
  /// Sum of the class diagonal (correctly labelled truth pixels).
  std::uint64_t correct() const;

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;

 private:
  std::size_t index(Label predicted, Label truth) const;

  std::size_t k_ = 0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Tallies every truth pixel against its predicted label. Pixels outside
/// the truth regions are ignored. Throws ValidationError when the truth
/// classes differ from the map legend or there are no truth pixels.
ConfusionMatrix build_confusion(const ClassificationMap& map,
                                const TrainingRegions& truth);

double overall_accuracy(const ConfusionMatrix& cm);

/// Expected chance agreement sum_i row_total(i) * col_total(i) / N^2 over
/// classes 1..K. Unclassified predictions only enter through N.
double chance_agreement(const ConfusionMatrix& cm);

/// (p_o - p_e) / (1 - p_e). Throws ValidationError when p_e == 1.
double kappa(const ConfusionMatrix& cm);

struct PercentMatrix {
  std::size_t classes = 0;
  /// cells[p][t - 1] = 100 * count(p, t) / col_total(t).
  std::vector<std::vector<double>> cells;
  /// 100 * row_total(p) / N.
  std::vector<double> row_totals;
};

/// Throws ValidationError when some column total is zero.
PercentMatrix percent_matrix(const ConfusionMatrix& cm);

/// Counts table, percent table, then the overall accuracy and kappa lines.
std::string format_report(const ConfusionMatrix& cm,
                          std::string_view title = {});

/// Recovers the counts table from format_report output.
ConfusionMatrix parse_report_counts(std::string_view report);

}  // namespace specmap
