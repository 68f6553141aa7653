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
/// @file mlp.hpp
/// @brief Feed-forward sigmoid network trained with per-sample backprop.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "specmap/raster.hpp"

namespace specmap {

struct MlpLayer {
  Eigen::MatrixXd weights;  // outputs x inputs
  Eigen::VectorXd biases;

  friend bool operator==(const MlpLayer& a, const MlpLayer& b) {
    return a.weights.rows() == b.weights.rows() &&
           a.weights.cols() == b.weights.cols() &&
           a.biases.size() == b.biases.size() && a.weights == b.weights &&
           a.biases == b.biases;
  }
};

struct MlpModel {
  /// Input, hidden..., output sizes. Trained models are [B, H, K].
  std::vector<std::size_t> layer_sizes;
  std::vector<MlpLayer> layers;
  /// Raw DNs are divided by this before the first layer.
  double input_scale = 255.0;
  std::uint64_t seed = 0;

  std::size_t inputs() const {
    return layer_sizes.empty() ? 0 : layer_sizes.front();
  }
  std::size_t outputs() const {
    return layer_sizes.empty() ? 0 : layer_sizes.back();
  }

  /// Output activations for an unscaled pixel vector.
  Eigen::VectorXd forward(std::span<const double> pixel) const;

  /// Throws ValidationError on inconsistent shapes.
  void validate() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct MlpHyperparameters {
  /// Hidden units; defaults to max(8, 2B).
  std::optional<std::size_t> hidden;
  double learning_rate = 0.2;
  int epochs = 500;
  std::uint64_t seed = 42;
  /// Defaults to 255 (one-byte DNs).
  std::optional<double> input_scale;
};

struct LabelledSample {
  Eigen::VectorXd pixel;
  Label label;  // 1..K
};

/// Stochastic gradient descent on squared error with one-hot targets.
/// Samples are presented in class order then region order, reshuffled at
/// the start of every epoch by a PRNG seeded from `hyper.seed`.
MlpModel train_mlp(std::span<const LabelledSample> samples,
                   std::size_t class_count, const MlpHyperparameters& hyper);
MlpModel train_mlp(const BandStack& image, const TrainingRegions& regions,
                   const MlpHyperparameters& hyper);

/// Fraction of samples whose argmax output matches their label.
double training_accuracy(const MlpModel& model,
                         std::span<const LabelledSample> samples);

std::vector<LabelledSample> collect_samples(const BandStack& image,
                                            const TrainingRegions& regions);

/// Text form: `layers n0 n1 ...`, `input_scale: s`, `seed: n`, then for
/// each layer one row of weights per output unit and one bias row.
std::string format_mlp(const MlpModel& model);
MlpModel parse_mlp(std::istream& in);
void write_mlp(const std::filesystem::path& path, const MlpModel& model);
MlpModel read_mlp(const std::filesystem::path& path);

}  // namespace specmap
