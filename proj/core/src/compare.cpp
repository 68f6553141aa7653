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
#include "specmap/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "specmap/error.hpp"
#include "specmap/rng.hpp"
#include "specmap/signatures.hpp"

namespace specmap {

std::pair<TrainingRegions, TrainingRegions> split_regions(
    const TrainingRegions& regions, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError(fmt::format(
        "split fraction must be strictly between 0 and 1, got {}",
        train_fraction));
  }
  Rng rng(seed);
  TrainingRegions train{regions.classes, {}};
  TrainingRegions test{regions.classes, {}};
  for (std::size_t i = 0; i < regions.class_count(); ++i) {
    const auto& members = regions.members[i];
    const std::size_t n = members.size();
    if (n < 2) {
      throw ValidationError(fmt::format(
          "class {} ('{}') has {} pixel(s); a split needs at least 2",
          regions.classes[i].id, regions.classes[i].name, n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    const auto wanted = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    const std::size_t n_train = std::clamp<std::size_t>(wanted, 1, n - 1);
    std::vector<bool> in_train(n, false);
    for (std::size_t j = 0; j < n_train; ++j) in_train[order[j]] = true;

    auto& tr = train.members.emplace_back();
    auto& te = test.members.emplace_back();
    for (std::size_t j = 0; j < n; ++j) {
      (in_train[j] ? tr : te).push_back(members[j]);
    }
  }
  return {std::move(train), std::move(test)};
}

void check_disjoint(const TrainingRegions& train, const TrainingRegions& truth) {
  if (train.class_count() != truth.class_count()) {
    throw ValidationError(fmt::format(
        "training regions have {} classes, truth has {}", train.class_count(),
        truth.class_count()));
  }
  for (std::size_t i = 0; i < train.class_count(); ++i) {
    if (train.classes[i].id != truth.classes[i].id ||
        train.classes[i].name != truth.classes[i].name) {
      throw ValidationError(fmt::format(
          "training class {} ('{}') does not match truth class {} ('{}')",
          train.classes[i].id, train.classes[i].name, truth.classes[i].id,
          truth.classes[i].name));
    }
  }
  std::set<PixelCoord> used;
  for (const auto& m : train.members) used.insert(m.begin(), m.end());
  for (const auto& m : truth.members) {
    for (const auto& p : m) {
      if (used.contains(p)) {
        throw ValidationError(fmt::format(
            "pixel ({}, {}) is in both the training and the truth regions",
            p.row, p.col));
      }
    }
  }
}

const MethodResult& ComparisonReport::result(Method method) const {
  for (const auto& r : results) {
    if (r.method == method) return r;
  }
  throw ValidationError(
      fmt::format("no result for method '{}'", method_name(method)));
}

std::string ComparisonReport::format() const {
  std::string out;
  for (const auto& r : results) {
    out += fmt::format("== {} ({}) ==\n", method_title(r.method),
                       method_name(r.method));
    if (r.ok()) {
      out += format_report(*r.confusion,
                           fmt::format("{} Classification", method_title(r.method)));
    } else {
      out += fmt::format("error: {}\n", r.error);
    }
    out += '\n';
  }
  out += "Ranking:";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& r = result(ranking[i]);
    out += fmt::format(" {}{}. {} (OA {:.4f}%, kappa {})", i ? "> " : "", i + 1,
                       method_name(r.method), 100.0 * r.overall_accuracy,
                       r.kappa ? fmt::format("{:.4f}", *r.kappa) : "undefined");
  }
  out += '\n';
  return out;
}

ComparisonReport run_compare(const BandStack& image,
                             const TrainingRegions& train,
                             const TrainingRegions& truth,
                             const CompareOptions& options) {
  train.validate(image.rows(), image.cols());
  truth.validate(image.rows(), image.cols());
  check_disjoint(train, truth);
  options.classifier.validate();

  std::optional<SignatureSet> sigs;
  std::string sig_error;
  try {
    sigs = extract_signatures(image, train);
  } catch (const Error& e) {
    sig_error = e.what();
  }

  ComparisonReport report;
  for (Method method : kAllMethods) {
    MethodResult result;
    result.method = method;
    try {
      std::optional<Classifier> classifier;
      if (method == Method::kMlp) {
        classifier = Classifier::from_model(train_mlp(image, train, options.mlp),
                                            options.classifier);
      } else {
        if (!sigs) throw ValidationError(sig_error);
        classifier =
            Classifier::from_signatures(method, *sigs, options.classifier);
      }
      const auto map =
          classify_image(image, *classifier, train.classes, options.threads);
      auto cm = build_confusion(map, truth);
      result.overall_accuracy = overall_accuracy(cm);
      try {
        result.kappa = kappa(cm);
      } catch (const ValidationError&) {
        result.kappa.reset();
      }
      result.confusion = std::move(cm);
    } catch (const Error& e) {
      result.error = e.what();
    }
    report.results.push_back(std::move(result));
  }

  for (const auto& r : report.results) {
    if (r.ok()) report.ranking.push_back(r.method);
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](Method a, Method b) {
                     const auto& ra = report.result(a);
                     const auto& rb = report.result(b);
                     if (ra.overall_accuracy != rb.overall_accuracy) {
                       return ra.overall_accuracy > rb.overall_accuracy;
                     }
                     const double ka = ra.kappa.value_or(
                         -std::numeric_limits<double>::infinity());
                     const double kb = rb.kappa.value_or(
                         -std::numeric_limits<double>::infinity());
                     if (ka != kb) return ka > kb;
                     return method_name(a) < method_name(b);
                   });
  return report;
}

}  // namespace specmap
