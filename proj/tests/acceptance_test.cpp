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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "specmap/assessment.hpp"
#include "specmap/classifiers.hpp"
#include "specmap/compare.hpp"
#include "specmap/error.hpp"
#include "specmap/mlp.hpp"
#include "specmap/raster_io.hpp"
#include "specmap/rng.hpp"
#include "specmap/signatures.hpp"
#include "specmap/synthesis.hpp"
#include "test_util.hpp"

namespace specmap {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& text) {
    if (pass) detail += (detail.empty() ? "" : "; ") + text;
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::span<const double> sp(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

const std::vector<std::vector<std::uint64_t>> kReferenceCounts = {
    {136, 5, 2}, {65367, 1, 0}, {0, 1514, 0}, {0, 0, 1022}};

Outcome reference_accuracy() {
  Outcome o;
  const auto cm = ConfusionMatrix::from_counts(kReferenceCounts);
  // Hand derivation of the chance term from matched class marginals.
  const double n = 68047.0;
  const double pe_oracle =
      (65368.0 * 65503.0 + 1514.0 * 1520.0 + 1022.0 * 1024.0) / (n * n);
  const double oa = overall_accuracy(cm);
  const double pe = chance_agreement(cm);
  const double k = kappa(cm);
  o.check(cm.grand_total() == 68047 && cm.correct() == 67903, "N=68047, hits=67903");
  o.check(std::abs(pe_oracle - 0.92544) < 5e-6, "hand p_e ~ 0.92544");
  o.check(std::abs(pe - pe_oracle) < 1e-12, "p_e matches hand derivation");
  o.check(std::abs(oa - 0.997884) <= 1e-6, "OA 0.997884 +-1e-6");
  o.check(std::abs(k - 0.9716) <= 1e-4, "kappa 0.9716 +-1e-4");
  o.note("OA=" + num(oa) + " p_e=" + num(pe) + " kappa=" + num(k));
  return o;
}

Outcome reference_percents() {
  Outcome o;
  const auto pm = percent_matrix(ConfusionMatrix::from_counts(kReferenceCounts));
  const struct {
    double got, want;
    const char* name;
  } cells[] = {{pm.cells[1][0], 99.79, "class-1 cell"},
               {pm.cells[2][1], 99.61, "class-2 cell"},
               {pm.cells[3][2], 99.80, "class-3 cell"},
               {pm.row_totals[1], 96.06, "class-1 row total"},
               {pm.row_totals[2], 2.22, "class-2 row total"},
               {pm.row_totals[3], 1.50, "class-3 row total"}};
  std::string values;
  for (const auto& c : cells) {
    o.check(std::abs(c.got - c.want) <= 0.01, std::string(c.name) + " " + num(c.want, 2));
    values += (values.empty() ? "" : " ") + num(c.got, 2);
  }
  o.note("cells " + values);
  return o;
}

Outcome liss_layout() {
  Outcome o;
  std::istringstream sidecar(
      "file_header_bytes: 540\nline_prefix_bytes: 32\nline_suffix_bytes: 0\n"
      "scan_lines: 5545\npixels_per_line: 5918\nbands: 4\nbytes_per_pixel: 1\n");
  const auto layout = parse_layout(sidecar);
  const std::uint64_t oracle = 540ull + 4ull * 5545ull * (32ull + 5918ull);
  o.check(layout.record_length() == 5950, "record_length 5950");
  o.check(oracle == 131971540ull && layout.expected_file_size() == oracle,
          "expected size 131,971,540");

  testing::TempDir dir;
  const auto path = dir / "scene.dat";
  {
    std::ofstream out(path, std::ios::binary);
    out << std::string(540, '\xee');
    std::string record(5950, '\0');
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t r = 0; r < 5545; ++r) {
        std::fill(record.begin(), record.begin() + 32, '\xaa');
        for (std::size_t c = 0; c < 5918; ++c) {
          record[32 + c] = static_cast<char>((b * 31 + r * 7 + c) % 256);
        }
        out.write(record.data(), static_cast<std::streamsize>(record.size()));
      }
    }
  }
  o.check(std::filesystem::file_size(path) == oracle, "generated file size");
  const auto img = read_bsq(path, layout);
  bool values_ok = img.bands() == 4 && img.rows() == 5545 && img.cols() == 5918;
  std::mt19937_64 gen(1);
  for (int i = 0; i < 2000 && values_ok; ++i) {
    const std::size_t b = gen() % 4, r = gen() % 5545, c = gen() % 5918;
    values_ok = img.at(b, r, c) == static_cast<float>((b * 31 + r * 7 + c) % 256);
  }
  o.check(values_ok, "full-size file parses to the written DNs");

  std::filesystem::resize_file(path, oracle - 1);
  bool truncated_error = false;
  try {
    read_bsq(path, layout);
  } catch (const SizeMismatchError& e) {
    truncated_error = e.expected() == oracle && e.actual() == oracle - 1;
  }
  o.check(truncated_error, "truncated file raises a size mismatch");
  o.note("record_length=5950 size=131971540, truncated file rejected");
  return o;
}

Outcome classifier_equivalences() {
  Outcome o;
  std::mt19937_64 gen(2026);
  std::uniform_int_distribution<int> kd(1, 5), bd(1, 6);
  std::size_t violations[4] = {0, 0, 0, 0};
  std::size_t pixels[4] = {0, 0, 0, 0};
  const int cases = 50, per_case = 20;  // 1000 pixels per property
  for (int t = 0; t < cases; ++t) {
    const int k = kd(gen);
    const auto b = static_cast<std::size_t>(bd(gen));
    const auto bi = static_cast<Eigen::Index>(b);
    const Eigen::MatrixXd shared = testing::random_spd(b, gen);
    std::vector<ClassSignature> id_sigs, eq_sigs;
    std::vector<Eigen::VectorXd> lo, hi;
    for (int i = 1; i <= k; ++i) {
      const auto mean = testing::random_vector(b, 1, 255, gen);
      id_sigs.push_back(testing::make_signature(i, mean, Eigen::MatrixXd::Identity(bi, bi)));
      auto s = testing::make_signature(i, mean, shared);
      const auto a = testing::random_vector(b, 0, 255, gen);
      const auto c = testing::random_vector(b, 0, 255, gen);
      s.band_min = a.cwiseMin(c);
      s.band_max = a.cwiseMax(c);
      lo.push_back(s.band_min);
      hi.push_back(s.band_max);
      eq_sigs.push_back(s);
    }
    const auto id_set = testing::make_set(id_sigs, Eigen::MatrixXd::Identity(bi, bi));
    const auto eq_set = testing::make_set(eq_sigs, shared);
    const auto mindist = Classifier::from_signatures(Method::kMinDist, id_set);
    const auto mahal_id = Classifier::from_signatures(Method::kMahalanobis, id_set);
    const auto maxlike = Classifier::from_signatures(Method::kMaxLike, eq_set);
    const auto mahal_eq = Classifier::from_signatures(Method::kMahalanobis, eq_set);
    const auto sam = Classifier::from_signatures(Method::kSam, eq_set);
    const auto box = Classifier::from_signatures(Method::kBox, eq_set);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int j = 0; j < per_case; ++j) {
      const auto x = testing::random_vector(b, 0, 255, gen);
      violations[0] += mindist.classify(sp(x)) != mahal_id.classify(sp(x));
      violations[1] += maxlike.classify(sp(x)) != mahal_eq.classify(sp(x));
      const Eigen::VectorXd scaled = scale(gen) * x;
      violations[2] += sam.classify(sp(x)) != sam.classify(sp(scaled));
      violations[3] += box.classify(sp(x)) != oracle::box_scan(x, lo, hi);
      for (auto& p : pixels) ++p;
    }
  }
  const char* names[4] = {"(a) mahalanobis=mindist", "(b) maxlike=mahalanobis",
                          "(c) sam scale invariance", "(d) box=brute-force scan"};
  std::string summary;
  for (int i = 0; i < 4; ++i) {
    o.check(violations[i] == 0 && pixels[i] == 1000,
            std::string(names[i]) + " violations=" + std::to_string(violations[i]));
    summary += (i ? ", " : "") + std::to_string(violations[i]);
  }
  o.note("1000 pixels per property, violations " + summary);
  return o;
}

SceneSpec recovery_spec() {
  SceneSpec spec;
  spec.rows = 64;
  spec.cols = 64;
  spec.bands = 4;
  spec.seed = 20260;
  const auto sd = Eigen::VectorXd::Constant(4, 3.0);
  spec.classes.push_back({{1, "water", {0, 0, 255}}, {0, 0, 20, 63},
                          testing::vec({40, 30, 20, 10}), sd});
  spec.classes.push_back({{2, "vegetation", {0, 255, 0}}, {21, 0, 42, 63},
                          testing::vec({60, 50, 160, 90}), sd});
  spec.classes.push_back({{3, "soil", {255, 0, 0}}, {43, 0, 63, 63},
                          testing::vec({150, 140, 120, 170}), sd});
  return spec;
}

Outcome synthetic_recovery() {
  Outcome o;
  const auto spec = recovery_spec();
  double min_sep = 1e300;
  for (std::size_t i = 0; i < spec.classes.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.classes.size(); ++j) {
      min_sep = std::min(min_sep, (spec.classes[i].mean - spec.classes[j].mean).norm());
    }
  }
  o.check(min_sep >= 20.0 * 3.0, "class means at least 20 sigma apart");

  const auto scene = generate_scene(spec);
  const auto [train, test] = split_regions(scene.truth, 0.5, 42);
  const auto sigs = extract_signatures(scene.image, train);
  std::string summary;
  for (auto m : {Method::kMaxLike, Method::kMahalanobis, Method::kMinDist}) {
    const auto map = classify_image(scene.image, Classifier::from_signatures(m, sigs),
                                    sigs.legend());
    const double oa = overall_accuracy(build_confusion(map, test));
    o.check(oa >= 0.99, std::string(method_name(m)) + " OA >= 0.99 (got " + num(oa, 4) + ")");
    summary += std::string(method_name(m)) + "=" + num(oa, 4) + " ";
  }

  const auto box_map = classify_image(
      scene.image, Classifier::from_signatures(Method::kBox, sigs), sigs.legend());
  std::size_t unclassified = 0, errors = 0, errors_inside = 0;
  for (std::size_t i = 0; i < test.class_count(); ++i) {
    const auto& s = sigs.signatures[i];
    for (const auto& p : test.members[i]) {
      const Label label = box_map.at(p.row, p.col);
      unclassified += label == kUnclassified;
      if (label == static_cast<Label>(i + 1)) continue;
      ++errors;
      const auto x = scene.image.pixel(p.row, p.col);
      const bool inside_own = (x.array() >= s.band_min.array()).all() &&
                              (x.array() <= s.band_max.array()).all();
      bool inside_lower = false;
      for (std::size_t j = 0; j < i; ++j) {
        const auto& t = sigs.signatures[j];
        inside_lower = inside_lower || ((x.array() >= t.band_min.array()).all() &&
                                        (x.array() <= t.band_max.array()).all());
      }
      errors_inside += inside_own && !inside_lower;
    }
  }
  o.check(errors_inside == 0, "box errs only outside its boxes");
  o.note(summary + "box unclassified=" + std::to_string(unclassified) +
         " box errors inside own box=" + std::to_string(errors_inside) + "/" +
         std::to_string(errors));
  return o;
}

std::vector<LabelledSample> one_band_task() {
  Rng rng(7);
  std::vector<LabelledSample> out;
  for (Label label : {Label{1}, Label{2}}) {
    const double centre = label == 1 ? 20.0 : 200.0;
    for (int i = 0; i < 50; ++i) {
      const double v = std::clamp(std::nearbyint(rng.normal(centre, 5.0)), 0.0, 255.0);
      out.push_back({testing::vec({v}), label});
    }
  }
  return out;
}

Outcome mlp_learning() {
  Outcome o;
  const auto samples = one_band_task();
  const MlpHyperparameters defaults;
  o.check(defaults.seed == 42 && defaults.epochs == 500, "defaults are seed 42, 500 epochs");
  const auto a = train_mlp(samples, 2, defaults);
  const auto b = train_mlp(samples, 2, defaults);
  o.check(a == b && format_mlp(a) == format_mlp(b), "same seed gives bit-identical models");
  const double acc = training_accuracy(a, samples);
  o.check(acc >= 0.95, "training accuracy >= 0.95 (got " + num(acc, 4) + ")");
  o.note("identical weights, training accuracy " + num(acc, 4));
  return o;
}

Outcome io_round_trips() {
  Outcome o;
  testing::TempDir dir;
  std::mt19937_64 gen(77);

  bool labels_ok = true;
  for (int t = 0; t < 25 && labels_ok; ++t) {
    ClassificationMap map;
    map.rows = 1 + gen() % 50;
    map.cols = 1 + gen() % 50;
    const int k = 1 + static_cast<int>(gen() % 255);
    for (int i = 1; i <= k; ++i) map.legend.push_back({i, "c" + std::to_string(i), default_class_color(i)});
    for (std::size_t i = 0; i < map.rows * map.cols; ++i) {
      map.labels.push_back(static_cast<Label>(gen() % static_cast<std::uint64_t>(k + 1)));
    }
    const auto files = write_map(map, dir / "map");
    labels_ok = read_labels(files.labels, map.rows, map.cols) == map.labels &&
                read_map(files.labels, files.legend) == map;
  }
  o.check(labels_ok, "label layer write/read identity");

  bool sigs_ok = true;
  double worst = 0.0;
  for (int t = 0; t < 25 && sigs_ok; ++t) {
    BandStack img(1 + gen() % 6, 12, 12);
    for (std::size_t b = 0; b < img.bands(); ++b)
      for (std::size_t r = 0; r < 12; ++r)
        for (std::size_t c = 0; c < 12; ++c) img.at(b, r, c) = static_cast<float>(gen() % 256);
    TrainingRegions regions;
    regions.classes = {{1, "a", {1, 2, 3}}, {2, "b", {4, 5, 6}}};
    regions.members.resize(2);
    for (std::size_t r = 0; r < 12; ++r)
      for (std::size_t c = 0; c < 12; ++c)
        if (gen() % 3 == 0) regions.members[r < 6 ? 0 : 1].push_back({r, c});
    const auto set = extract_signatures(img, regions);
    std::istringstream in(format_signatures(set));
    const auto back = parse_signatures(in);
    const auto rel = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double d = std::abs(x.data()[i] - y.data()[i]);
        const double r = d == 0.0 ? 0.0 : d / std::abs(x.data()[i]);
        worst = std::max(worst, r);
        if (r > 5e-10) return false;
      }
      return x.rows() == y.rows() && x.cols() == y.cols();
    };
    sigs_ok = back.class_count() == set.class_count() &&
              format_signatures(back) == format_signatures(set) &&
              rel(*set.pooled_covariance, *back.pooled_covariance);
    for (std::size_t i = 0; i < set.class_count() && sigs_ok; ++i) {
      const auto& s = set.signatures[i];
      const auto& q = back.signatures[i];
      sigs_ok = s.count == q.count && s.name == q.name && rel(s.mean, q.mean) &&
                rel(s.covariance, q.covariance) && rel(s.band_min, q.band_min) &&
                rel(s.band_max, q.band_max);
    }
  }
  o.check(sigs_ok, "signature serialize/parse identity to 10 significant digits");

  const auto spec = recovery_spec();
  const auto scene = generate_scene(spec);
  const auto files = write_scene(scene, spec, dir / "scene");
  std::istringstream spec_text(format_scene_spec(spec));
  const auto regenerated = generate_scene(parse_scene_spec(spec_text));
  const bool scene_ok = regenerated.image == scene.image && regenerated.truth == scene.truth &&
                        read_bsq(files.image, read_layout(files.layout)) == scene.image;
  o.check(scene_ok, "scene regeneration from spec and seed is bit-identical");
  o.note("labels, signatures (worst relative error " + num(worst, 12) + "), scene");
  return o;
}

Outcome parallel_determinism() {
  Outcome o;
  std::mt19937_64 gen(88);
  const auto spec = recovery_spec();
  const auto scene = generate_scene(spec);
  const auto sigs = extract_signatures(scene.image, scene.truth);
  testing::TempDir dir;
  std::string summary;
  for (auto m : kAllMethods) {
    const Classifier c =
        m == Method::kMlp
            ? Classifier::from_model([&] {
                MlpHyperparameters h;
                h.epochs = 5;
                return train_mlp(scene.image, scene.truth, h);
              }())
            : Classifier::from_signatures(m, sigs);
    std::string bytes[2];
    int slot = 0;
    for (const char* threads : {"0", "4"}) {
      ::setenv("SPECMAP_THREADS", threads, 1);
      const auto map = classify_image(scene.image, c, sigs.legend(), threads_from_env());
      const auto files = write_map(map, dir / (std::string(method_name(m)) + threads));
      bytes[slot++] = testing::read_file(files.labels);
    }
    o.check(bytes[0] == bytes[1] && !bytes[0].empty(),
            std::string(method_name(m)) + " label layers differ");
  }
  ::unsetenv("SPECMAP_THREADS");
  o.note("all six methods byte-identical with SPECMAP_THREADS 0 and 4");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = no stated runtime limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace specmap

int main() {
  using namespace specmap;
  const std::vector<Criterion> criteria = {
      {1, "reference error matrix accuracy and kappa", 0, reference_accuracy},
      {2, "reference percent matrix", 0, reference_percents},
      {3, "LISS-3 layout and full-size file", 0, liss_layout},
      {4, "cross-classifier equivalence properties", 10, classifier_equivalences},
      {5, "synthetic scene recovery", 30, synthetic_recovery},
      {6, "MLP determinism and learning", 30, mlp_learning},
      {7, "I/O round trips", 0, io_round_trips},
      {8, "determinism under parallelism", 0, parallel_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      outcome.check(false, "runtime " + num(secs, 2) + " s over " +
                               num(c.budget_seconds, 0) + " s budget");
    }
    failures += !outcome.pass;
    std::printf("[%s] criterion %d: %s (%.2f s) %s\n", outcome.pass ? "PASS" : "FAIL", c.id,
                c.name, secs, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
