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
#include "specmap/mlp.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "io_util.hpp"
#include "specmap/error.hpp"
#include "specmap/rng.hpp"
#include "text.hpp"

namespace specmap {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

Eigen::Index argmax_lowest(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

MlpLayer random_layer(std::size_t inputs, std::size_t outputs, Rng& rng) {
  MlpLayer layer;
  layer.weights.resize(static_cast<Eigen::Index>(outputs),
                       static_cast<Eigen::Index>(inputs));
  for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      layer.weights(r, c) = rng.uniform(-0.5, 0.5);
    }
  }
  layer.biases.resize(static_cast<Eigen::Index>(outputs));
  for (Eigen::Index i = 0; i < layer.biases.size(); ++i) {
    layer.biases[i] = rng.uniform(-0.5, 0.5);
  }
  return layer;
}

}  // namespace

Eigen::VectorXd MlpModel::forward(std::span<const double> pixel) const {
  if (pixel.size() != inputs()) {
    throw ValidationError(fmt::format("network expects {} inputs, got {}",
                                      inputs(), pixel.size()));
  }
  Eigen::VectorXd a =
      Eigen::Map<const Eigen::VectorXd>(pixel.data(),
                                        static_cast<Eigen::Index>(pixel.size())) /
      input_scale;
  for (const auto& layer : layers) {
    a = sigmoid(layer.weights * a + layer.biases);
  }
  return a;
}

void MlpModel::validate() const {
  if (layer_sizes.size() < 2) {
    throw ValidationError("network needs at least an input and output layer");
  }
  for (auto n : layer_sizes) {
    if (n == 0) throw ValidationError("network layer sizes must be >= 1");
  }
  if (layers.size() != layer_sizes.size() - 1) {
    throw ValidationError("network weight list does not match layer sizes");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto rows = static_cast<std::size_t>(layers[i].weights.rows());
    const auto cols = static_cast<std::size_t>(layers[i].weights.cols());
    if (rows != layer_sizes[i + 1] || cols != layer_sizes[i] ||
        static_cast<std::size_t>(layers[i].biases.size()) != layer_sizes[i + 1]) {
      throw ValidationError(fmt::format(
          "layer {} weights are {}x{}, expected {}x{}", i + 1, rows, cols,
          layer_sizes[i + 1], layer_sizes[i]));
    }
  }
  if (!(input_scale > 0.0)) {
    throw ValidationError("network input scale must be positive");
  }
}

MlpModel train_mlp(std::span<const LabelledSample> samples,
                   std::size_t class_count, const MlpHyperparameters& hyper) {
  if (samples.empty()) throw ValidationError("mlp: no training samples");
  if (hyper.epochs < 1) {
    throw ValidationError(
        fmt::format("mlp: epochs must be >= 1, got {}", hyper.epochs));
  }
  if (!(hyper.learning_rate > 0.0)) {
    throw ValidationError("mlp: learning rate must be positive");
  }
  if (hyper.hidden && *hyper.hidden < 1) {
    throw ValidationError("mlp: hidden layer needs at least one unit");
  }
  const auto bands = static_cast<std::size_t>(samples.front().pixel.size());
  std::set<Label> seen;
  for (const auto& s : samples) {
    if (static_cast<std::size_t>(s.pixel.size()) != bands) {
      throw ValidationError("mlp: ragged training pixels");
    }
    if (s.label < 1 || s.label > class_count) {
      throw ValidationError(fmt::format(
          "mlp: sample label {} outside 1..{}", s.label, class_count));
    }
    seen.insert(s.label);
  }
  if (class_count < 2 || seen.size() < 2) {
    throw ValidationError("mlp: training needs at least two classes");
  }

  const std::size_t hidden = hyper.hidden.value_or(std::max<std::size_t>(8, 2 * bands));
  Rng rng(hyper.seed);
  MlpModel model;
  model.layer_sizes = {bands, hidden, class_count};
  model.input_scale = hyper.input_scale.value_or(255.0);
  model.seed = hyper.seed;
  model.layers.push_back(random_layer(bands, hidden, rng));
  model.layers.push_back(random_layer(hidden, class_count, rng));
  model.validate();

  auto& w1 = model.layers[0].weights;
  auto& b1 = model.layers[0].biases;
  auto& w2 = model.layers[1].weights;
  auto& b2 = model.layers[1].biases;
  const double lr = hyper.learning_rate;

  std::vector<Eigen::VectorXd> inputs;
  inputs.reserve(samples.size());
  for (const auto& s : samples) inputs.push_back(s.pixel / model.input_scale);

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::VectorXd target(static_cast<Eigen::Index>(class_count));

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (const std::size_t idx : order) {
      const auto& x = inputs[idx];
      const Eigen::VectorXd h = sigmoid(w1 * x + b1);
      const Eigen::VectorXd o = sigmoid(w2 * h + b2);
      target.setZero();
      target[samples[idx].label - 1] = 1.0;

      const Eigen::VectorXd delta_out =
          ((o - target).array() * o.array() * (1.0 - o.array())).matrix();
      const Eigen::VectorXd delta_hidden =
          ((w2.transpose() * delta_out).array() * h.array() *
           (1.0 - h.array()))
              .matrix();

      w2.noalias() -= lr * delta_out * h.transpose();
      b2 -= lr * delta_out;
      w1.noalias() -= lr * delta_hidden * x.transpose();
      b1 -= lr * delta_hidden;
    }
  }
  return model;
}

std::vector<LabelledSample> collect_samples(const BandStack& image,
                                            const TrainingRegions& regions) {
  regions.validate(image.rows(), image.cols());
  std::vector<LabelledSample> samples;
  samples.reserve(regions.total_members());
  for (std::size_t i = 0; i < regions.class_count(); ++i) {
    for (const auto& p : regions.members[i]) {
      samples.push_back({image.pixel(p.row, p.col), static_cast<Label>(i + 1)});
    }
  }
  return samples;
}

MlpModel train_mlp(const BandStack& image, const TrainingRegions& regions,
                   const MlpHyperparameters& hyper) {
  const auto samples = collect_samples(image, regions);
  return train_mlp(samples, regions.class_count(), hyper);
}

double training_accuracy(const MlpModel& model,
                         std::span<const LabelledSample> samples) {
  if (samples.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& s : samples) {
    const auto out = model.forward(
        std::span<const double>(s.pixel.data(), static_cast<std::size_t>(s.pixel.size())));
    if (static_cast<Label>(argmax_lowest(out) + 1) == s.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

std::string format_mlp(const MlpModel& model) {
  model.validate();
  std::string out = "layers";
  for (auto n : model.layer_sizes) out += fmt::format(" {}", n);
  out += '\n';
  out += fmt::format("input_scale: {}\n", text::format_g10(model.input_scale));
  out += fmt::format("seed: {}\n", model.seed);
  const auto row = [&](const auto& values, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += text::format_g10(values(i));
    }
    out += '\n';
  };
  for (const auto& layer : model.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      row(layer.weights.row(r), layer.weights.cols());
    }
    row(layer.biases, layer.biases.size());
  }
  return out;
}

MlpModel parse_mlp(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto next = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      auto tokens = text::split(text::trim(text::strip_comment(line)));
      if (!tokens.empty()) return tokens;
    }
    throw ParseError("mlp model: unexpected end of file");
  };
  const auto numbers = [&](std::size_t expected) {
    const auto tokens = next();
    if (tokens.size() != expected) {
      throw ParseError(fmt::format("mlp model line {}: expected {} values, got {}",
                                   line_no, expected, tokens.size()));
    }
    std::vector<double> v;
    for (auto t : tokens) {
      v.push_back(text::to_double(t, fmt::format("mlp model line {}", line_no)));
    }
    return v;
  };

  MlpModel model;
  auto tokens = next();
  if (tokens[0] != "layers" || tokens.size() < 3) {
    throw ParseError("mlp model: first line must be 'layers <n0> <n1> ...'");
  }
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto n = text::to_uint(tokens[i], "mlp layer size");
    if (n < 1 || n > 100000) {
      throw ParseError(fmt::format("mlp model: layer size {} out of range", n));
    }
    model.layer_sizes.push_back(n);
  }
  tokens = next();
  if (tokens.size() != 2 || tokens[0] != "input_scale:") {
    throw ParseError(fmt::format("mlp model line {}: expected 'input_scale:'", line_no));
  }
  model.input_scale = text::to_double(tokens[1], "mlp input_scale");
  tokens = next();
  if (tokens.size() != 2 || tokens[0] != "seed:") {
    throw ParseError(fmt::format("mlp model line {}: expected 'seed:'", line_no));
  }
  model.seed = text::to_uint(tokens[1], "mlp seed");

  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
    const auto in_n = model.layer_sizes[l];
    const auto out_n = model.layer_sizes[l + 1];
    MlpLayer layer;
    layer.weights.resize(static_cast<Eigen::Index>(out_n), static_cast<Eigen::Index>(in_n));
    for (std::size_t r = 0; r < out_n; ++r) {
      const auto v = numbers(in_n);
      for (std::size_t c = 0; c < in_n; ++c) {
        layer.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
      }
    }
    const auto b = numbers(out_n);
    layer.biases = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(out_n));
    model.layers.push_back(std::move(layer));
  }
  while (std::getline(in, line)) {
    if (!text::trim(text::strip_comment(line)).empty()) {
      throw ParseError("mlp model: trailing content after the last layer");
    }
  }
  model.validate();
  return model;
}

void write_mlp(const std::filesystem::path& path, const MlpModel& model) {
  io::write_text(path, format_mlp(model));
}

MlpModel read_mlp(const std::filesystem::path& path) {
  auto in = io::open_in(path);
  return parse_mlp(in);
}

}  // namespace specmap
