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
#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "specmap/assessment.hpp"
#include "specmap/classifiers.hpp"
#include "specmap/compare.hpp"
#include "specmap/error.hpp"
#include "specmap/mlp.hpp"
#include "specmap/raster_io.hpp"
#include "specmap/signatures.hpp"
#include "specmap/synthesis.hpp"

namespace specmap::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path with_extension(const fs::path& prefix, std::string_view ext) {
  auto p = prefix;
  p += ext;
  return p;
}

struct MlpFlags {
  std::optional<std::size_t> hidden;
  double learning_rate = 0.2;
  int epochs = 500;
  std::uint64_t seed = 42;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--hidden", hidden, "hidden units (default max(8, 2B))");
    cmd.add_option("--learning-rate", learning_rate, "SGD step size")
        ->capture_default_str();
    cmd.add_option("--epochs", epochs, "training epochs")->capture_default_str();
    cmd.add_option("--mlp-seed", seed, "weight-initialization seed")
        ->capture_default_str();
  }

  MlpHyperparameters hyper(const RasterLayout& layout) const {
    MlpHyperparameters h;
    h.hidden = hidden;
    h.learning_rate = learning_rate;
    h.epochs = epochs;
    h.seed = seed;
    h.input_scale = layout.max_value();
    return h;
  }
};

struct InfoArgs {
  std::string layout;
  std::string image;
};

struct StatsArgs {
  std::string image, layout, roi, out, mlp_out;
  MlpFlags mlp;
};

struct ClassifyArgs {
  std::string method, image, layout, sig, model, out = "classified";
  std::optional<double> threshold, angle_threshold, ridge;
};

struct AssessArgs {
  std::string map, legend, truth, out, title;
};

struct SynthArgs {
  std::string spec, out;
};

struct CompareArgs {
  std::string image, layout, roi, truth, out;
  std::optional<double> split;
  std::uint64_t seed = 42;
  std::optional<double> ridge;
  MlpFlags mlp;
};

int do_info(const InfoArgs& a, std::ostream& out) {
  const auto layout = read_layout(a.layout);
  out << fmt::format("file_header_bytes: {}\n", layout.file_header_bytes)
      << fmt::format("line_prefix_bytes: {}\n", layout.line_prefix_bytes)
      << fmt::format("line_suffix_bytes: {}\n", layout.line_suffix_bytes)
      << fmt::format("scan_lines: {}\n", layout.scan_lines)
      << fmt::format("pixels_per_line: {}\n", layout.pixels_per_line)
      << fmt::format("bands: {}\n", layout.bands)
      << fmt::format("bytes_per_pixel: {}\n", layout.bytes_per_pixel)
      << fmt::format("byte_order: {}\n",
                     layout.byte_order == ByteOrder::kBig ? "big" : "little")
      << fmt::format("record_length: {}\n", layout.record_length())
      << fmt::format("expected_file_size: {}\n", layout.expected_file_size());
  if (!a.image.empty()) {
    const auto actual = fs::file_size(a.image);
    if (actual != layout.expected_file_size()) {
      throw SizeMismatchError(a.image, layout.expected_file_size(), actual);
    }
    out << fmt::format("image: {} ({} bytes, matches layout)\n", a.image, actual);
  }
  return kExitOk;
}

int do_stats(const StatsArgs& a, std::ostream& out) {
  const auto layout = read_layout(a.layout);
  const auto image = read_bsq(a.image, layout);
  const auto regions = read_roi(a.roi, image.rows(), image.cols());
  const auto sigs = extract_signatures(image, regions);
  write_signatures(a.out, sigs);
  for (const auto& s : sigs.signatures) {
    out << fmt::format("class {} {}: {} pixels{}\n", s.class_id, s.name, s.count,
                       s.degenerate() ? " (no covariance)" : "");
  }
  out << fmt::format("wrote {}\n", a.out);
  if (!a.mlp_out.empty()) {
    const auto model = train_mlp(image, regions, a.mlp.hyper(layout));
    write_mlp(a.mlp_out, model);
    out << fmt::format("wrote {}\n", a.mlp_out);
  }
  return kExitOk;
}

int do_classify(const ClassifyArgs& a, std::ostream& out) {
  const auto method = parse_method(a.method);
  if (!method) {
    throw UsageError(fmt::format("unknown method '{}'; valid methods: {}",
                                 a.method, method_list()));
  }
  ClassifierConfig cfg;
  cfg.covariance_ridge = a.ridge;
  if (a.threshold) {
    switch (*method) {
      case Method::kMinDist:
      case Method::kMahalanobis:
        cfg.max_distance_threshold = a.threshold;
        break;
      case Method::kMlp:
        cfg.min_activation_threshold = a.threshold;
        break;
      default:
        throw UsageError(fmt::format("--threshold is not supported by method '{}'",
                                     a.method));
    }
  }
  if (a.angle_threshold) {
    if (*method != Method::kSam) {
      throw UsageError("--angle-threshold only applies to method 'sam'");
    }
    cfg.max_angle_threshold_deg = a.angle_threshold;
  }
  if (*method == Method::kMlp && a.model.empty()) {
    throw UsageError("method 'mlp' needs --model (train one with 'stats --mlp-out')");
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  const auto layout = read_layout(a.layout);
  const auto image = read_bsq(a.image, layout);
  const auto sigs = read_signatures(a.sig);
  const auto classifier =
      *method == Method::kMlp
          ? Classifier::from_model(read_mlp(a.model), cfg)
          : Classifier::from_signatures(*method, sigs, cfg);
  const auto map =
      classify_image(image, classifier, sigs.legend(), threads_from_env());
  const auto files = write_map(map, a.out);

  std::vector<std::size_t> counts(map.legend.size() + 1, 0);
  for (Label l : map.labels) ++counts[l];
  out << fmt::format("{} classification of {}x{} pixels\n", method_title(*method),
                     map.rows, map.cols);
  out << fmt::format("  unclassified: {}\n", counts[0]);
  for (const auto& c : map.legend) {
    out << fmt::format("  class {} {}: {}\n", c.id, c.name,
                       counts[static_cast<std::size_t>(c.id)]);
  }
  out << fmt::format("wrote {} {} {}\n", files.labels.string(),
                     files.image.string(), files.legend.string());
  return kExitOk;
}

int do_assess(const AssessArgs& a, std::ostream& out) {
  const auto map = read_map(a.map, a.legend);
  const auto truth = read_roi(a.truth, map.rows, map.cols);
  const auto cm = build_confusion(map, truth);
  const auto report = format_report(cm, a.title);
  std::ofstream file(a.out);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", a.out));
  file << report;
  if (!file.flush()) throw IoError(fmt::format("failed writing '{}'", a.out));
  out << report;
  return kExitOk;
}

int do_synth(const SynthArgs& a, std::ostream& out) {
  const auto spec = read_scene_spec(a.spec);
  const auto scene = generate_scene(spec);
  const auto files = write_scene(scene, spec, a.out);
  out << fmt::format("wrote {} {} {} {} {} {}\n", files.image.string(),
                     files.layout.string(), files.truth.string(),
                     files.truth_map.labels.string(),
                     files.truth_map.image.string(),
                     files.truth_map.legend.string());
  return kExitOk;
}

int do_compare(const CompareArgs& a, std::ostream& out) {
  if (!a.truth.empty() && a.split) {
    throw UsageError("--truth and --split are mutually exclusive");
  }
  const auto layout = read_layout(a.layout);
  const auto image = read_bsq(a.image, layout);
  const auto regions = read_roi(a.roi, image.rows(), image.cols());

  TrainingRegions train;
  TrainingRegions truth;
  if (!a.truth.empty()) {
    train = regions;
    truth = read_roi(a.truth, image.rows(), image.cols());
  } else {
    std::tie(train, truth) = split_regions(regions, a.split.value_or(0.5), a.seed);
  }

  CompareOptions options;
  options.classifier.covariance_ridge = a.ridge;
  options.mlp = a.mlp.hyper(layout);
  options.threads = threads_from_env();
  const auto report = run_compare(image, train, truth, options);
  const auto text = report.format();

  const auto path = with_extension(a.out, ".txt");
  std::ofstream file(path);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  file << text;
  if (!file.flush()) throw IoError(fmt::format("failed writing '{}'", path.string()));

  for (const auto& r : report.results) {
    if (r.ok()) {
      out << fmt::format("{:<12} OA {:>9.4f}%  kappa {}\n", method_name(r.method),
                         100.0 * r.overall_accuracy,
                         r.kappa ? fmt::format("{:.4f}", *r.kappa) : "undefined");
    } else {
      out << fmt::format("{:<12} error: {}\n", method_name(r.method), r.error);
    }
  }
  out << fmt::format("wrote {}\n", path.string());
  return report.ranking.empty() ? kExitRuntime : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supervised multispectral image classification", "specmap"};
  app.require_subcommand(1, 1);

  InfoArgs info;
  auto* info_cmd = app.add_subcommand("info", "describe a layout sidecar");
  info_cmd->add_option("--layout", info.layout, "layout sidecar")->required();
  info_cmd->add_option("--image", info.image, "raw image to check against the layout");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "extract class signatures");
  stats_cmd->add_option("--image", stats.image, "raw BSQ image")->required();
  stats_cmd->add_option("--layout", stats.layout, "layout sidecar")->required();
  stats_cmd->add_option("--roi", stats.roi, "training regions")->required();
  stats_cmd->add_option("--out", stats.out, "signature file to write")->required();
  stats_cmd->add_option("--mlp-out", stats.mlp_out, "also train a network and write it here");
  stats.mlp.add_to(*stats_cmd);

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "classify every pixel");
  classify_cmd->add_option("--method", classify.method, method_list())->required();
  classify_cmd->add_option("--image", classify.image, "raw BSQ image")->required();
  classify_cmd->add_option("--layout", classify.layout, "layout sidecar")->required();
  classify_cmd->add_option("--sig", classify.sig, "signature file")->required();
  classify_cmd->add_option("--model", classify.model, "network model (method mlp)");
  classify_cmd->add_option("--threshold", classify.threshold,
                           "rejection threshold: distance (mindist), squared "
                           "distance (mahalanobis) or activation (mlp)");
  classify_cmd->add_option("--angle-threshold", classify.angle_threshold,
                           "maximum spectral angle in degrees (sam)");
  classify_cmd->add_option("--ridge", classify.ridge,
                           "covariance ridge for near-singular matrices");
  classify_cmd->add_option("--out", classify.out, "output prefix")->capture_default_str();

  AssessArgs assess;
  auto* assess_cmd = app.add_subcommand("assess", "error matrix against ground truth");
  assess_cmd->add_option("--map", assess.map, "label layer (.lbl)")->required();
  assess_cmd->add_option("--legend", assess.legend, "legend (.leg)")->required();
  assess_cmd->add_option("--truth", assess.truth, "ground-truth regions")->required();
  assess_cmd->add_option("--out", assess.out, "report file")->required();
  assess_cmd->add_option("--title", assess.title, "report title line");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene");
  synth_cmd->add_option("--spec", synth.spec, "scene spec")->required();
  synth_cmd->add_option("--out", synth.out, "output prefix")->required();

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "train, classify and assess all six methods");
  compare_cmd->add_option("--image", compare.image, "raw BSQ image")->required();
  compare_cmd->add_option("--layout", compare.layout, "layout sidecar")->required();
  compare_cmd->add_option("--roi", compare.roi, "training regions")->required();
  auto* truth_opt = compare_cmd->add_option("--truth", compare.truth, "ground-truth regions");
  auto* split_opt = compare_cmd->add_option(
      "--split", compare.split, "fraction of --roi used for training (default 0.5)");
  truth_opt->excludes(split_opt);
  compare_cmd->add_option("--seed", compare.seed, "split seed")->capture_default_str();
  compare_cmd->add_option("--ridge", compare.ridge, "covariance ridge");
  compare_cmd->add_option("--out", compare.out, "report prefix (<P>.txt)")->required();
  compare.mlp.add_to(*compare_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "specmap: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*info_cmd) return do_info(info, out);
    if (*stats_cmd) return do_stats(stats, out);
    if (*classify_cmd) return do_classify(classify, out);
    if (*assess_cmd) return do_assess(assess, out);
    if (*synth_cmd) return do_synth(synth, out);
    if (*compare_cmd) return do_compare(compare, out);
  } catch (const UsageError& e) {
    err << "specmap: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "specmap: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("specmap");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace specmap::cli
