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
#include "specmap/assessment.hpp"

#include <sstream>

#include <fmt/format.h>

#include "specmap/error.hpp"
#include "text.hpp"

namespace specmap {

namespace {

constexpr int kLabelWidth = 14;
constexpr int kCellWidth = 12;

std::string row_label(std::size_t p) {
  return p == 0 ? std::string("Unclassified") : fmt::format("Class{}", p);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : k_(classes), counts_((classes + 1) * classes, 0) {
  if (classes == 0) {
    throw ValidationError("confusion matrix needs at least one class");
  }
}

ConfusionMatrix ConfusionMatrix::from_counts(
    const std::vector<std::vector<std::uint64_t>>& rows) {
  if (rows.size() < 2) {
    throw ValidationError(
        "confusion counts need an unclassified row plus one row per class");
  }
  ConfusionMatrix cm(rows.size() - 1);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    if (rows[p].size() != cm.k_) {
      throw ValidationError(fmt::format(
          "confusion row {} has {} counts, expected {}", p, rows[p].size(),
          cm.k_));
    }
    for (std::size_t t = 0; t < cm.k_; ++t) {
      cm.add(static_cast<Label>(p), static_cast<Label>(t + 1), rows[p][t]);
    }
  }
  return cm;
}

std::size_t ConfusionMatrix::index(Label predicted, Label truth) const {
  if (predicted > k_ || truth < 1 || truth > k_) {
    throw ValidationError(fmt::format(
        "confusion cell (predicted {}, truth {}) outside a {}-class matrix",
        predicted, truth, k_));
  }
  return static_cast<std::size_t>(predicted) * k_ + (truth - 1);
}

std::uint64_t ConfusionMatrix::count(Label predicted, Label truth) const {
  return counts_[index(predicted, truth)];
}

void ConfusionMatrix::add(Label predicted, Label truth, std::uint64_t n) {
  counts_[index(predicted, truth)] += n;
  total_ += n;
}

std::uint64_t ConfusionMatrix::row_total(Label predicted) const {
  std::uint64_t sum = 0;
  for (std::size_t t = 1; t <= k_; ++t) {
    sum += count(predicted, static_cast<Label>(t));
  }
  return sum;
}

std::uint64_t ConfusionMatrix::col_total(Label truth) const {
  std::uint64_t sum = 0;
  for (std::size_t p = 0; p <= k_; ++p) {
    sum += count(static_cast<Label>(p), truth);
  }
  return sum;
}

std::uint64_t ConfusionMatrix::correct() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 1; i <= k_; ++i) {
    sum += count(static_cast<Label>(i), static_cast<Label>(i));
  }
  return sum;
}

ConfusionMatrix build_confusion(const ClassificationMap& map,
                                const TrainingRegions& truth) {
  map.validate();
  if (truth.class_count() != map.legend.size()) {
    throw ValidationError(fmt::format(
        "truth has {} classes but the map legend has {}", truth.class_count(),
        map.legend.size()));
  }
  for (std::size_t i = 0; i < truth.class_count(); ++i) {
    if (truth.classes[i].id != map.legend[i].id ||
        truth.classes[i].name != map.legend[i].name) {
      throw ValidationError(fmt::format(
          "truth class {} ('{}') does not match legend class {} ('{}')",
          truth.classes[i].id, truth.classes[i].name, map.legend[i].id,
          map.legend[i].name));
    }
  }
  truth.validate(map.rows, map.cols);
  ConfusionMatrix cm(truth.class_count());
  for (std::size_t i = 0; i < truth.class_count(); ++i) {
    for (const auto& p : truth.members[i]) {
      cm.add(map.at(p.row, p.col), static_cast<Label>(i + 1));
    }
  }
  if (cm.grand_total() == 0) {
    throw ValidationError("no ground-truth pixels to assess");
  }
  return cm;
}

double overall_accuracy(const ConfusionMatrix& cm) {
  if (cm.grand_total() == 0) {
    throw ValidationError("overall accuracy is undefined for an empty matrix");
  }
  return static_cast<double>(cm.correct()) /
         static_cast<double>(cm.grand_total());
}

double chance_agreement(const ConfusionMatrix& cm) {
  if (cm.grand_total() == 0) {
    throw ValidationError("chance agreement is undefined for an empty matrix");
  }
  const double n = static_cast<double>(cm.grand_total());
  double sum = 0.0;
  for (std::size_t i = 1; i <= cm.class_count(); ++i) {
    const auto l = static_cast<Label>(i);
    sum += static_cast<double>(cm.row_total(l)) *
           static_cast<double>(cm.col_total(l));
  }
  return sum / (n * n);
}

double kappa(const ConfusionMatrix& cm) {
  const double pe = chance_agreement(cm);
  // p_e == 1 exactly when one class holds every prediction and every truth
  // pixel; test that on the integer marginals.
  for (std::size_t i = 1; i <= cm.class_count(); ++i) {
    const auto l = static_cast<Label>(i);
    if (cm.row_total(l) == cm.grand_total() &&
        cm.col_total(l) == cm.grand_total()) {
      throw ValidationError(
          "kappa is undefined: chance agreement equals 1 (degenerate "
          "marginals)");
    }
  }
  return (overall_accuracy(cm) - pe) / (1.0 - pe);
}

PercentMatrix percent_matrix(const ConfusionMatrix& cm) {
  if (cm.grand_total() == 0) {
    throw ValidationError("percent matrix is undefined for an empty matrix");
  }
  const std::size_t k = cm.class_count();
  PercentMatrix pm;
  pm.classes = k;
  pm.cells.assign(k + 1, std::vector<double>(k, 0.0));
  pm.row_totals.assign(k + 1, 0.0);
  for (std::size_t t = 1; t <= k; ++t) {
    const auto col = cm.col_total(static_cast<Label>(t));
    if (col == 0) {
      throw ValidationError(fmt::format(
          "class {} has no ground-truth pixels; its percent column is "
          "undefined",
          t));
    }
    for (std::size_t p = 0; p <= k; ++p) {
      pm.cells[p][t - 1] = 100.0 *
                           static_cast<double>(cm.count(static_cast<Label>(p),
                                                        static_cast<Label>(t))) /
                           static_cast<double>(col);
    }
  }
  const double n = static_cast<double>(cm.grand_total());
  for (std::size_t p = 0; p <= k; ++p) {
    pm.row_totals[p] =
        100.0 * static_cast<double>(cm.row_total(static_cast<Label>(p))) / n;
  }
  return pm;
}

std::string format_report(const ConfusionMatrix& cm, std::string_view title) {
  const std::size_t k = cm.class_count();
  std::string out;
  if (!title.empty()) out += fmt::format("{}\n", title);

  const auto header = [&]() {
    std::string h = fmt::format("{:<{}}", "Class", kLabelWidth);
    for (std::size_t t = 1; t <= k; ++t) {
      h += fmt::format("{:>{}}", fmt::format("Class{}", t), kCellWidth);
    }
    h += fmt::format("{:>{}}\n", "Total", kCellWidth);
    return h;
  };

  out += "Error Matrix Ground Truth (Pixels)\n";
  out += header();
  for (std::size_t p = 0; p <= k; ++p) {
    out += fmt::format("{:<{}}", row_label(p), kLabelWidth);
    for (std::size_t t = 1; t <= k; ++t) {
      out += fmt::format("{:>{}}",
                         cm.count(static_cast<Label>(p), static_cast<Label>(t)),
                         kCellWidth);
    }
    out += fmt::format("{:>{}}\n", cm.row_total(static_cast<Label>(p)), kCellWidth);
  }
  out += fmt::format("{:<{}}", "Total", kLabelWidth);
  for (std::size_t t = 1; t <= k; ++t) {
    out += fmt::format("{:>{}}", cm.col_total(static_cast<Label>(t)), kCellWidth);
  }
  out += fmt::format("{:>{}}\n", cm.grand_total(), kCellWidth);

  out += "\nError Matrix Ground Truth (Percent)\n";
  std::string percent_body;
  try {
    const auto pm = percent_matrix(cm);
    percent_body += header();
    std::vector<double> col_sums(k, 0.0);
    double total_sum = 0.0;
    for (std::size_t p = 0; p <= k; ++p) {
      percent_body += fmt::format("{:<{}}", row_label(p), kLabelWidth);
      for (std::size_t t = 0; t < k; ++t) {
        percent_body += fmt::format("{:>{}.2f}", pm.cells[p][t], kCellWidth);
        col_sums[t] += pm.cells[p][t];
      }
      percent_body += fmt::format("{:>{}.2f}\n", pm.row_totals[p], kCellWidth);
      total_sum += pm.row_totals[p];
    }
    percent_body += fmt::format("{:<{}}", "Total", kLabelWidth);
    for (double s : col_sums) percent_body += fmt::format("{:>{}.2f}", s, kCellWidth);
    percent_body += fmt::format("{:>{}.2f}\n", total_sum, kCellWidth);
  } catch (const ValidationError& e) {
    percent_body = fmt::format("(undefined: {})\n", e.what());
  }
  out += percent_body;

  out += '\n';
  if (cm.grand_total() > 0) {
    out += fmt::format("Overall Accuracy = ({}/{}) = {:.4f}%\n", cm.correct(),
                       cm.grand_total(), 100.0 * overall_accuracy(cm));
    try {
      out += fmt::format("Kappa Coefficient = {:.4f}\n", kappa(cm));
    } catch (const ValidationError&) {
      out += "Kappa Coefficient = undefined\n";
    }
  }
  return out;
}

ConfusionMatrix parse_report_counts(std::string_view report) {
  std::istringstream in{std::string(report)};
  std::string line;
  bool found = false;
  while (std::getline(in, line)) {
    if (line.find("Ground Truth (Pixels)") != std::string::npos) {
      found = true;
      break;
    }
  }
  if (!found) throw ParseError("report: no '(Pixels)' counts table");
  if (!std::getline(in, line)) throw ParseError("report: missing table header");
  const auto header = text::split(line);
  if (header.size() < 3 || header.front() != "Class" || header.back() != "Total") {
    throw ParseError("report: malformed counts header");
  }
  const std::size_t k = header.size() - 2;
  std::vector<std::vector<std::uint64_t>> rows;
  for (std::size_t p = 0; p <= k; ++p) {
    if (!std::getline(in, line)) throw ParseError("report: truncated counts table");
    const auto tokens = text::split(line);
    if (tokens.size() != k + 2 || tokens[0] != row_label(p)) {
      throw ParseError(fmt::format("report: malformed counts row '{}'", line));
    }
    std::vector<std::uint64_t> row;
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t < k; ++t) {
      row.push_back(text::to_uint(tokens[1 + t], "report count"));
      sum += row.back();
    }
    if (text::to_uint(tokens[k + 1], "report row total") != sum) {
      throw ParseError(fmt::format("report: row total mismatch in '{}'", line));
    }
    rows.push_back(std::move(row));
  }
  return ConfusionMatrix::from_counts(rows);
}

}  // namespace specmap
