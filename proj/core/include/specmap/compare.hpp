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
/// @file compare.hpp
/// @brief Train every method on one region set, score it on another, and
/// rank the results.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specmap/assessment.hpp"
#include "specmap/classifiers.hpp"
#include "specmap/mlp.hpp"
#include "specmap/raster.hpp"

namespace specmap {

/// Randomly splits each class's members: round(fraction * n) pixels, kept
/// within [1, n - 1], go to the first set and the rest to the second.
/// Every class needs at least two members.
std::pair<TrainingRegions, TrainingRegions> split_regions(
    const TrainingRegions& regions, double train_fraction, std::uint64_t seed);

/// Throws ValidationError if a pixel appears in both sets or the class
/// lists differ.
void check_disjoint(const TrainingRegions& train, const TrainingRegions& truth);

struct CompareOptions {
  ClassifierConfig classifier;
  MlpHyperparameters mlp;
  std::size_t threads = 0;
};

struct MethodResult {
  Method method = Method::kBox;
  /// Empty when the method could not be trained or applied.
  std::optional<ConfusionMatrix> confusion;
  double overall_accuracy = 0.0;
  std::optional<double> kappa;
  std::string error;

  bool ok() const noexcept { return confusion.has_value(); }
};

struct ComparisonReport {
  /// In kAllMethods order.
  std::vector<MethodResult> results;
  /// Successful methods by overall accuracy, then kappa, then name.
  std::vector<Method> ranking;

  const MethodResult& result(Method method) const;
  std::string format() const;
};

ComparisonReport run_compare(const BandStack& image,
                             const TrainingRegions& train,
                             const TrainingRegions& truth,
                             const CompareOptions& options = {});

}  // namespace specmap
